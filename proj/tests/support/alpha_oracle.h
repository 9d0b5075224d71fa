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

#ifndef SALSA_TESTS_ALPHA_ORACLE_H_
#define SALSA_TESTS_ALPHA_ORACLE_H_

#include <optional>
#include <vector>

namespace salsa::testing {

// Nominal alpha by direct enumeration of value pairs, without building a
// coincidence matrix:
//   D_o = 1/n * sum_u 1/(m_u - 1) * #{ordered pairs i != j in u : v_i != v_j}
//   D_e = 1/(n (n - 1)) * #{ordered pairs of pairable values : v_a != v_b}
// labels[coder][unit], negative = missing. Returns nullopt when undefined.
inline std::optional<double> brute_force_alpha(const std::vector<std::vector<int>> &labels) {
  std::vector<std::vector<int>> units;
  const std::size_t n_units = labels.empty() ? 0 : labels.front().size();
  for (std::size_t u = 0; u < n_units; ++u) {
    std::vector<int> values;
    for (const auto &coder : labels) {
      if (coder[u] >= 0) values.push_back(coder[u]);
    }
    if (values.size() >= 2) units.push_back(values);
  }
  std::vector<int> pool;
  for (const auto &u : units) pool.insert(pool.end(), u.begin(), u.end());
  const double n = static_cast<double>(pool.size());
  if (pool.size() < 2) return std::nullopt;

  double observed = 0.0;
  for (const auto &u : units) {
    double disagreeing = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j && u[i] != u[j]) disagreeing += 1.0;
      }
    }
    observed += disagreeing / static_cast<double>(u.size() - 1);
  }
  observed /= n;

  double expected = 0.0;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (a != b && pool[a] != pool[b]) expected += 1.0;
    }
  }
  expected /= n * (n - 1.0);
  if (expected == 0.0) return std::nullopt;
  return 1.0 - observed / expected;
}

}  // namespace salsa::testing

#endif  // SALSA_TESTS_ALPHA_ORACLE_H_
