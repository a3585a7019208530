// Copyright 2026 The avseg Authors. All Rights Reserved.
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

#include "avseg/assignment.hpp"

#include <cmath>
#include <limits>

#include "avseg/error.hpp"

namespace avseg {

std::vector<std::size_t> solve_assignment(const CostMatrix& cost) {
  const std::size_t n = cost.rows();
  const std::size_t m = cost.cols();
  if (n > m) {
    throw ValidationError("assignment needs at least as many columns as rows (" +
                          std::to_string(n) + " > " + std::to_string(m) + ")");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (!std::isfinite(cost(r, c))) throw ValidationError("assignment cost is not finite");
    }
  }
  if (n == 0) return {};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based; column 0 is a virtual source. owner[c] is the row matched to column c.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(m + 1, 0.0);
  std::vector<std::size_t> owner(m + 1, 0), prev(m + 1, 0);

  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t col0 = 0;
    std::vector<double> min_slack(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[col0] = true;
      const std::size_t r0 = owner[col0];
      double delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= m; ++c) {
        if (used[c]) continue;
        const double reduced = cost(r0 - 1, c - 1) - row_pot[r0] - col_pot[c];
        if (reduced < min_slack[c]) {
          min_slack[c] = reduced;
          prev[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= m; ++c) {
        if (used[c]) {
          row_pot[owner[c]] += delta;
          col_pot[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (owner[col0] != 0);
    // Flip the augmenting path.
    do {
      const std::size_t col1 = prev[col0];
      owner[col0] = owner[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<std::size_t> assignment(n);
  for (std::size_t c = 1; c <= m; ++c) {
    if (owner[c] != 0) assignment[owner[c] - 1] = c - 1;
  }
  return assignment;
}

double assignment_cost(const CostMatrix& cost, std::span<const std::size_t> assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.size(); ++r) total += cost(r, assignment[r]);
  return total;
}

}  // namespace avseg
