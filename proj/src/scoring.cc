// Copyright 2026 The SALSA Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "salsa/scoring.h"

#include <Eigen/Dense>
#include <cmath>

#include "salsa/error.h"

namespace salsa {

std::string_view to_string(WeightProvenance p) {
  switch (p) {
    case WeightProvenance::kDefault:
      return "default";
    case WeightProvenance::kFitted:
      return "fitted";
    case WeightProvenance::kManual:
      return "manual";
  }
  return "?";
}

WeightProvenance parse_weight_provenance(std::string_view name) {
  if (name == "default") return WeightProvenance::kDefault;
  if (name == "fitted") return WeightProvenance::kFitted;
  if (name == "manual") return WeightProvenance::kManual;
  throw InvalidInput("unknown weight provenance '" + std::string(name) + "'");
}

WeightScheme WeightScheme::Default() {
  return FromArray({1.0, 1.0, 1.0, -1.0, -5.0, -1.0}, WeightProvenance::kDefault);
}

WeightScheme WeightScheme::FromArray(const std::array<double, kNumKeys> &weights,
                                     WeightProvenance provenance) {
  WeightScheme w;
  w.weights_ = weights;
  w.provenance_ = provenance;
  return w;
}

std::size_t WeightScheme::key_index(Family family, Polarity polarity) {
  if (polarity == Polarity::kTrivial) throw InvalidInput("trivial polarity has no weight key");
  return (polarity == Polarity::kError ? 3 : 0) + static_cast<std::size_t>(family);
}

Family WeightScheme::key_family(std::size_t index) { return static_cast<Family>(index % 3); }

Polarity WeightScheme::key_polarity(std::size_t index) {
  return index < 3 ? Polarity::kQuality : Polarity::kError;
}

std::string WeightScheme::key_name(std::size_t index) {
  return std::string(to_string(key_family(index))) + "/" +
         std::string(to_string(key_polarity(index)));
}

double WeightScheme::get(Family family, Polarity polarity) const {
  if (polarity == Polarity::kTrivial) return 0.0;
  return weights_[key_index(family, polarity)];
}

void WeightScheme::set(Family family, Polarity polarity, double value) {
  weights_[key_index(family, polarity)] = value;
}

std::vector<std::string> WeightScheme::sign_warnings() const {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < kNumKeys; ++k) {
    const bool quality = key_polarity(k) == Polarity::kQuality;
    if ((quality && weights_[k] < 0) || (!quality && weights_[k] > 0)) {
      out.push_back("weight " + key_name(k) + " = " + std::to_string(weights_[k]) +
                    (quality ? " is negative" : " is positive"));
    }
  }
  return out;
}

WeightScheme WeightScheme::FromJson(const nlohmann::json &doc) {
  if (!doc.is_object()) throw SchemaError("", "weight scheme must be an object");
  WeightScheme w;
  auto prov = doc.find("provenance");
  if (prov == doc.end() || !prov->is_string()) {
    throw SchemaError("/provenance", "expected one of default, fitted, manual");
  }
  try {
    w.provenance_ = parse_weight_provenance(prov->get<std::string>());
  } catch (const InvalidInput &e) {
    throw SchemaError("/provenance", e.what());
  }
  auto weights = doc.find("weights");
  if (weights == doc.end() || !weights->is_object()) throw SchemaError("/weights", "expected object");
  for (std::size_t k = 0; k < kNumKeys; ++k) {
    const std::string fam(to_string(key_family(k)));
    const std::string pol(to_string(key_polarity(k)));
    const std::string path = "/weights/" + fam + "/" + pol;
    auto f = weights->find(fam);
    if (f == weights->end() || !f->is_object()) throw SchemaError("/weights/" + fam, "missing family");
    auto v = f->find(pol);
    if (v == f->end() || !v->is_number()) throw SchemaError(path, "expected number");
    w.weights_[k] = v->get<double>();
    if (!std::isfinite(w.weights_[k])) throw SchemaError(path, "weight must be finite");
  }
  if (w.provenance_ == WeightProvenance::kDefault) {
    auto warnings = w.sign_warnings();
    if (!warnings.empty()) throw SchemaError("/weights", warnings.front());
  }
  return w;
}

nlohmann::json WeightScheme::ToJson() const {
  nlohmann::json weights = nlohmann::json::object();
  for (std::size_t k = 0; k < kNumKeys; ++k) {
    weights[std::string(to_string(key_family(k)))][std::string(to_string(key_polarity(k)))] =
        weights_[k];
  }
  return {{"format", "salsa-weights"},
          {"version", 1},
          {"provenance", to_string(provenance_)},
          {"weights", weights}};
}

double length_factor(const Edit &edit, const SentencePair &pair) {
  const std::size_t denom = pair.complex.length + pair.simplified.length;
  if (denom == 0) throw InvalidInput("pair '" + pair.id + "' has empty sentences");
  std::size_t covered = 0;
  for (const SpanRange &s : effective_spans(edit)) covered += s.length();
  if (covered == 0) throw InvalidInput("edit '" + edit.id + "' has zero total span length");
  return std::exp(static_cast<double>(covered) / static_cast<double>(denom));
}

int signed_rating(const Classification &c) {
  switch (c.polarity) {
    case Polarity::kQuality:
      return c.rating;
    case Polarity::kError:
      return -c.rating;
    case Polarity::kTrivial:
      return 0;
  }
  return 0;
}

ScoreBreakdown sentence_score(const SentencePair &pair, const std::vector<Edit> &edits,
                              const WeightScheme &weights, const Typology &typology) {
  ScoreBreakdown out;
  for (const Edit &edit : edits) {
    if (!edit.classification) {
      throw ScoringError("edit '" + edit.id + "' of pair '" + pair.id + "' is not classified");
    }
    const Classification &c = *edit.classification;
    EditContribution item;
    item.edit_id = edit.id;
    item.polarity = c.polarity;
    item.length_factor = length_factor(edit, pair);
    if (c.polarity != Polarity::kTrivial) {
      item.family = typology.family_of(edit);
      item.magnitude = c.rating;
      item.contribution = item.length_factor * weights.get(item.family, c.polarity) * c.rating;
    } else if (const TypeDef *def = typology.trivial_type_for(edit.operation)) {
      item.family = def->family;
    }
    out.total += item.contribution;
    out.by_family[static_cast<std::size_t>(item.family)] += item.contribution;
    if (c.polarity == Polarity::kQuality) out.quality += item.contribution;
    if (c.polarity == Polarity::kError) out.error += item.contribution;
    out.per_edit.push_back(std::move(item));
  }
  return out;
}

FeatureRow score_features(const SentencePair &pair, const std::vector<Edit> &edits,
                          const Typology &typology) {
  FeatureRow row{};
  for (const Edit &edit : edits) {
    if (!edit.classification) {
      throw ScoringError("edit '" + edit.id + "' of pair '" + pair.id + "' is not classified");
    }
    const Classification &c = *edit.classification;
    if (c.polarity == Polarity::kTrivial) continue;
    row[WeightScheme::key_index(typology.family_of(edit), c.polarity)] +=
        length_factor(edit, pair) * c.rating;
  }
  return row;
}

FitResult fit_weights(std::span<const FitSample> samples, const Typology &typology,
                      const FitOptions &options) {
  constexpr std::size_t kKeys = WeightScheme::kNumKeys;
  std::size_t with_edits = 0;
  for (const FitSample &s : samples) {
    if (!std::isfinite(s.gold)) throw FitError("gold score of pair '" + s.pair.id + "' is not finite");
    if (!s.edits.empty()) ++with_edits;
  }
  if (with_edits < 6) {
    throw FitError("need at least 6 sentences with edits, got " + std::to_string(with_edits));
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(kKeys));
  Eigen::VectorXd y(n);
  FitDiagnostics diag;
  diag.sentences = samples.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const FitSample &s = samples[static_cast<std::size_t>(i)];
    const FeatureRow row = score_features(s.pair, s.edits, typology);
    for (std::size_t k = 0; k < kKeys; ++k) x(i, static_cast<Eigen::Index>(k)) = row[k];
    y(i) = s.gold;
    for (const Edit &e : s.edits) {
      if (e.classification && e.classification->polarity != Polarity::kTrivial) {
        ++diag.feature_counts[WeightScheme::key_index(typology.family_of(e), e.classification->polarity)];
      }
    }
  }

  std::array<double, kKeys> weights{};
  std::vector<std::size_t> free;
  std::vector<std::string> unobserved;
  Eigen::VectorXd target = y;
  for (std::size_t k = 0; k < kKeys; ++k) {
    if (auto it = options.fixed.find(k); it != options.fixed.end()) {
      weights[k] = it->second;
      target -= x.col(static_cast<Eigen::Index>(k)) * it->second;
      continue;
    }
    if (diag.feature_counts[k] == 0) unobserved.push_back(WeightScheme::key_name(k));
    free.push_back(k);
  }
  if (!unobserved.empty()) {
    std::string msg = "rank-deficient design matrix; unobserved keys:";
    for (const auto &u : unobserved) msg += " (" + u + ")";
    throw FitError(msg);
  }

  if (!free.empty()) {
    Eigen::MatrixXd xf(n, static_cast<Eigen::Index>(free.size()));
    for (std::size_t j = 0; j < free.size(); ++j) {
      xf.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(free[j]));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xf);
    if (qr.rank() < xf.cols()) {
      throw FitError("rank-deficient design matrix: free keys are collinear (rank " +
                     std::to_string(qr.rank()) + " of " + std::to_string(xf.cols()) + ")");
    }
    const Eigen::VectorXd w = qr.solve(target);
    for (std::size_t j = 0; j < free.size(); ++j) weights[free[j]] = w(static_cast<Eigen::Index>(j));

    const Eigen::VectorXd resid = target - xf * w;
    const double rss = resid.squaredNorm();
    const auto dof = n - xf.cols();
    if (dof > 0) {
      const double sigma2 = rss / static_cast<double>(dof);
      const Eigen::MatrixXd cov =
          (xf.transpose() * xf).ldlt().solve(Eigen::MatrixXd::Identity(xf.cols(), xf.cols()));
      for (std::size_t j = 0; j < free.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        diag.standard_errors[free[j]] = std::sqrt(std::max(0.0, sigma2 * cov(jj, jj)));
      }
    }
  }

  Eigen::VectorXd wv(static_cast<Eigen::Index>(kKeys));
  for (std::size_t k = 0; k < kKeys; ++k) wv(static_cast<Eigen::Index>(k)) = weights[k];
  const Eigen::VectorXd pred = x * wv;
  const Eigen::VectorXd resid = y - pred;
  diag.residual_norm = resid.norm();
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  diag.r_squared = tss > 0 ? 1.0 - resid.squaredNorm() / tss : (resid.squaredNorm() == 0 ? 1.0 : 0.0);
  diag.predictions.assign(pred.data(), pred.data() + pred.size());

  FitResult result{WeightScheme::FromArray(weights, WeightProvenance::kFitted), std::move(diag)};
  result.diagnostics.warnings = result.weights.sign_warnings();
  return result;
}

}  // namespace salsa
