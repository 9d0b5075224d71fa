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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "salsa/agreement.h"
#include "salsa/cli.h"
#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/qe_export.h"
#include "salsa/scoring.h"
#include "salsa/tokenizer.h"
#include "salsa/typology.h"

namespace py = pybind11;
using nlohmann::json;

// Structured arguments cross the boundary as JSON text; the Python package
// wraps these entry points with json.dumps / json.loads.
namespace {

std::vector<salsa::Edit> EditsFrom(const std::string &text) {
  const json doc = json::parse(text);
  if (!doc.is_array()) throw salsa::SchemaError("", "expected an array of edits");
  std::vector<salsa::Edit> edits;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    edits.push_back(salsa::edit_from_json(doc[i], "/" + std::to_string(i)));
  }
  return edits;
}

salsa::SentencePair PairFrom(const std::string &text) { return salsa::pair_from_json(json::parse(text), ""); }

salsa::WeightScheme WeightsFrom(const std::string &text) {
  return text.empty() ? salsa::WeightScheme::Default() : salsa::WeightScheme::FromJson(json::parse(text));
}

salsa::Side SideFrom(const std::string &name) { return salsa::parse_side(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the salsa package";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const json::exception &e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });
  // Translators registered later are tried first.
  auto &base = py::register_exception<salsa::Error>(m, "SalsaError", PyExc_ValueError);
  py::register_exception<salsa::SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<salsa::FitError>(m, "FitError", base.ptr());
  py::register_exception<salsa::UndefinedStatistic>(m, "UndefinedStatistic", base.ptr());

  m.attr("FINE_TUNE_WORD_LOSS_WEIGHT") = salsa::kFineTuneWordLossWeight;

  m.def("tokenize", [](const std::string &text) {
    std::vector<std::tuple<std::size_t, std::size_t, std::string>> out;
    for (const salsa::Token &t : salsa::tokenize(text, salsa::Side::kComplex, "").tokens) {
      out.emplace_back(t.start, t.end, t.surface);
    }
    return out;
  }, py::arg("text"));

  m.def("classify", [](const std::vector<std::string> &answers) {
    return salsa::Typology::Default().classify(answers);
  }, py::arg("answers"));

  m.def("typology_json", [] { return salsa::Typology::Default().ToJson().dump(); });

  m.def("validate_edit_json", [](const std::string &edit, const std::string &pair) {
    json out = json::array();
    for (const salsa::Violation &v :
         salsa::validate_edit(salsa::edit_from_json(json::parse(edit), ""), PairFrom(pair),
                              salsa::Typology::Default())) {
      out.push_back({{"edit_id", v.edit_id}, {"code", v.code}, {"message", v.message}});
    }
    return out.dump();
  });

  m.def("length_factor_json", [](const std::string &edit, const std::string &pair) {
    return salsa::length_factor(salsa::edit_from_json(json::parse(edit), ""), PairFrom(pair));
  });

  m.def("sentence_score_json", [](const std::string &pair, const std::string &edits, const std::string &weights) {
    const salsa::ScoreBreakdown b =
        salsa::sentence_score(PairFrom(pair), EditsFrom(edits), WeightsFrom(weights), salsa::Typology::Default());
    json per_edit = json::array();
    for (const salsa::EditContribution &c : b.per_edit) {
      per_edit.push_back({{"edit_id", c.edit_id}, {"length_factor", c.length_factor}, {"contribution", c.contribution}});
    }
    return json{{"total", b.total},
                {"by_family", {{"conceptual", b.by_family[0]}, {"syntactic", b.by_family[1]}, {"lexical", b.by_family[2]}}},
                {"by_polarity", {{"quality", b.quality}, {"error", b.error}}},
                {"per_edit", per_edit}}
        .dump();
  });

  m.def("fit_weights_json", [](const std::string &samples_text) {
    const json doc = json::parse(samples_text);
    std::vector<salsa::FitSample> samples;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string path = "/" + std::to_string(i);
      salsa::FitSample s;
      s.pair = salsa::pair_from_json(doc[i].at("pair"), path + "/pair");
      for (std::size_t k = 0; k < doc[i].at("edits").size(); ++k) {
        s.edits.push_back(salsa::edit_from_json(doc[i]["edits"][k], path + "/edits/" + std::to_string(k)));
      }
      s.gold = doc[i].at("gold").get<double>();
      samples.push_back(std::move(s));
    }
    const salsa::FitResult fit = salsa::fit_weights(samples, salsa::Typology::Default());
    return json{{"weights", fit.weights.ToJson()},
                {"r_squared", fit.diagnostics.r_squared},
                {"residual_norm", fit.diagnostics.residual_norm},
                {"standard_errors", fit.diagnostics.standard_errors}}
        .dump();
  });

  m.def("krippendorff_alpha", [](const std::vector<std::vector<std::optional<std::string>>> &labels) {
    salsa::TokenLabelMatrix matrix;
    std::size_t units = 0;
    for (const auto &row : labels) units = std::max(units, row.size());
    for (std::size_t u = 0; u < units; ++u) matrix.units.push_back(std::to_string(u));
    for (std::size_t c = 0; c < labels.size(); ++c) {
      matrix.coders.push_back(std::to_string(c));
      std::vector<int> row(units, salsa::TokenLabelMatrix::kMissing);
      for (std::size_t u = 0; u < labels[c].size(); ++u) {
        if (labels[c][u]) row[u] = matrix.intern(*labels[c][u]);
      }
      matrix.labels.push_back(std::move(row));
    }
    return salsa::krippendorff_alpha(matrix);
  }, py::arg("labels"), "Nominal alpha; labels[coder][unit], None marks a missing value.");

  m.def("word_ratings_json", [](const std::string &pair, const std::string &edits, const std::string &side) {
    return salsa::word_ratings(PairFrom(pair), EditsFrom(edits), SideFrom(side));
  });

  m.def("word_labels_json", [](const std::string &pair, const std::string &edits, const std::string &side) {
    std::vector<std::string> out;
    for (salsa::WordLabel l : salsa::word_labels(PairFrom(pair), EditsFrom(edits), SideFrom(side))) {
      out.emplace_back(salsa::to_string(l));
    }
    return out;
  });

  m.def("qe_losses", [](double pred_sentence, double gold_sentence, const std::vector<double> &pred_words,
                        const std::vector<double> &gold_words, double lambda_s, double lambda_w) {
    const salsa::QeLosses l =
        salsa::qe_losses(pred_sentence, gold_sentence, pred_words, gold_words, lambda_s, lambda_w);
    py::dict out;
    out["sentence"] = l.sentence;
    out["word"] = l.word;
    out["combined"] = l.combined;
    return out;
  }, py::arg("pred_sentence"), py::arg("gold_sentence"), py::arg("pred_words"), py::arg("gold_words"),
     py::arg("lambda_s"), py::arg("lambda_w") = salsa::kFineTuneWordLossWeight);

  m.def("run_cli", [](const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = salsa::cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
