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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace avseg {

/// Row-major rows x cols matrix of finite costs.
class CostMatrix {
 public:
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Minimum-cost injective assignment of every row to a distinct column
/// (rows <= cols), via shortest augmenting paths with dual potentials.
/// Returns the column chosen for each row. Throws ValidationError if
/// rows > cols or a cost is not finite. O(rows^2 * cols).
std::vector<std::size_t> solve_assignment(const CostMatrix& cost);

/// Sum of cost(r, assignment[r]) accumulated in row order.
double assignment_cost(const CostMatrix& cost, std::span<const std::size_t> assignment);

}  // namespace avseg
