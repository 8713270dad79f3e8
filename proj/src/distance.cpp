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

#include "resolver/distance.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include <Eigen/Core>

#include "resolver/lsap.hpp"

namespace resolver {

double DistanceMeasure::operator()(std::string_view y,
                                   std::string_view x) const {
  switch (kind) {
    case DistanceKind::kConstant:
      return ConstantDistance(y, x);
    case DistanceKind::kNormalizedLevenshtein:
      return NormalizedLevenshtein(y, x);
    case DistanceKind::kHybrid:
      return HybridDistance(y, x, hybrid);
  }
  return 0.0;
}

int Levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<int> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double NormalizedLevenshtein(std::string_view y, std::string_view x) {
  const size_t longest = std::max(y.size(), x.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(Levenshtein(y, x)) / longest;
}

std::vector<std::string> Tokenize(std::string_view s, char separator) {
  std::vector<std::string> tokens;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(separator, start);
    if (end == std::string_view::npos) end = s.size();
    if (end > start) tokens.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

double HybridDistance(std::string_view y, std::string_view x,
                      const HybridWeights& weights) {
  // Rows: tokens of y then |x| nulls. Columns: tokens of x then |y| nulls.
  const std::vector<std::string> from = Tokenize(y, weights.separator);
  const std::vector<std::string> to = Tokenize(x, weights.separator);
  const int nf = static_cast<int>(from.size());
  const int nt = static_cast<int>(to.size());
  const int n = nf + nt;
  if (n == 0) return 0.0;

  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nt; ++j) {
      cost(i, j) = weights.substitution * Levenshtein(from[i], to[j]);
    }
    for (int j = nt; j < n; ++j) {
      cost(i, j) = weights.deletion * static_cast<double>(from[i].size());
    }
  }
  for (int i = nf; i < n; ++i) {
    for (int j = 0; j < nt; ++j) {
      cost(i, j) = weights.insertion * static_cast<double>(to[j].size());
    }
  }

  // A small surcharge on token-token pairs picks, among alignments of equal
  // total cost, the one with the most operations.
  const double eps = 1e-9 * (1.0 + cost.maxCoeff());
  Eigen::MatrixXd perturbed = cost;
  perturbed.topLeftCorner(nf, nt).array() += eps;
  const LsapResult solution = SolveLsap(perturbed);

  double total = 0.0;
  int operations = 0;
  for (int i = 0; i < n; ++i) {
    const int j = solution.assignment[i];
    total += cost(i, j);
    if (i < nf || j < nt) ++operations;
  }
  return total / operations;
}

RangeIndex RangeIndex::Build(const std::vector<std::string>& domain,
                             const DistanceMeasure& measure) {
  if (measure.kind == DistanceKind::kConstant) {
    RangeIndex index;
    const int n = static_cast<int>(domain.size());
    index.domain_size_ = n;
    index.complete_ = true;
    index.d_max_ = 0.0;
    index.d_min_.assign(n, n > 1 ? 0.0 : kInf);
    index.all_.reserve(n);
    for (int v = 0; v < n; ++v) index.all_.push_back({v, 0.0});
    return index;
  }
  return Build(
      domain,
      [&measure](std::string_view y, std::string_view x) {
        return measure(y, x);
      },
      measure.cutoff);
}

RangeIndex RangeIndex::Build(const std::vector<std::string>& domain,
                             const DistanceFn& dist, double cutoff) {
  RangeIndex index;
  const int n = static_cast<int>(domain.size());
  index.domain_size_ = n;
  index.forward_.resize(n);
  index.reverse_.resize(n);
  index.d_min_.assign(n, kInf);

  std::vector<double> row_max(n, 0.0);
  auto scan_rows = [&](int begin, int end) {
    for (int y = begin; y < end; ++y) {
      auto& out = index.forward_[y];
      for (int x = 0; x < n; ++x) {
        const double d = dist(domain[y], domain[x]);
        if (x != y) {
          row_max[y] = std::max(row_max[y], d);
        }
        if (d <= cutoff) {
          out.push_back({x, d});
          if (x != y) index.d_min_[y] = std::min(index.d_min_[y], d);
        }
      }
    }
  };

  const long long work = static_cast<long long>(n) * n;
  const int threads =
      work < 200000
          ? 1
          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (threads == 1) {
    scan_rows(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(scan_rows, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  for (int y = 0; y < n; ++y) {
    index.d_max_ = std::max(index.d_max_, row_max[y]);
    for (const Neighbor& nb : index.forward_[y]) {
      index.reverse_[nb.value].push_back({y, nb.distance});
    }
  }
  bool complete = true;
  for (int y = 0; y < n && complete; ++y) {
    if (static_cast<int>(index.forward_[y].size()) != n) complete = false;
    for (const Neighbor& nb : index.forward_[y]) {
      if (nb.distance != 0.0) complete = false;
    }
  }
  index.complete_ = complete;
  return index;
}

std::span<const Neighbor> RangeIndex::Query(ValueId x) const {
  if (complete_ && reverse_.empty()) return all_;
  return reverse_[x];
}

std::span<const Neighbor> RangeIndex::Forward(ValueId y) const {
  if (complete_ && forward_.empty()) return all_;
  return forward_[y];
}

double RangeIndex::CutDistance(ValueId y, ValueId x) const {
  if (complete_) return 0.0;
  const auto& list = forward_[y];
  auto it = std::lower_bound(
      list.begin(), list.end(), x,
      [](const Neighbor& nb, ValueId v) { return nb.value < v; });
  if (it == list.end() || it->value != x) return kInf;
  return it->distance;
}

double RangeIndex::d_min(ValueId y) const { return d_min_[y]; }

}  // namespace resolver
