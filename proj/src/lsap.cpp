// Copyright 2026 The resolver Authors
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

#include "resolver/lsap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resolver/common.hpp"

namespace resolver {

LsapResult SolveLsap(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) {
    throw InvalidInput("LSAP cost matrix must be square");
  }
  if (!cost.allFinite()) {
    throw InvalidInput("LSAP cost matrix has non-finite entries");
  }
  const int n = static_cast<int>(cost.rows());
  LsapResult result;
  if (n == 0) return result;

  // Shortest augmenting paths with potentials u (rows) and v (columns).
  // Index 0 is a sentinel column; rows and columns are 1-based below.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<char> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const int i0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          col1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.assignment.assign(n, -1);
  for (int j = 1; j <= n; ++j) result.assignment[match[j] - 1] = j - 1;
  for (int i = 0; i < n; ++i) result.cost += cost(i, result.assignment[i]);
  return result;
}

}  // namespace resolver
