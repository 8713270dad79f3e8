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

#ifndef RESOLVER_LSAP_HPP_
#define RESOLVER_LSAP_HPP_

#include <vector>

#include <Eigen/Core>

namespace resolver {

struct LsapResult {
  // assignment[row] = column.
  std::vector<int> assignment;
  double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Hungarian method
// with row/column potentials, O(n^3)). Throws InvalidInput for non-square
// or non-finite input.
LsapResult SolveLsap(const Eigen::MatrixXd& cost);

}  // namespace resolver

#endif  // RESOLVER_LSAP_HPP_
