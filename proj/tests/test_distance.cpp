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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "resolver/distance.hpp"
#include "resolver/random.hpp"

namespace resolver {
namespace {

std::string RandomString(Rng& rng, int max_len, int alphabet) {
  const int len = static_cast<int>(Uniform01(rng) * (max_len + 1));
  std::string s;
  for (int k = 0; k < len; ++k) {
    s.push_back(static_cast<char>('a' + static_cast<int>(Uniform01(rng) * alphabet)));
  }
  return s;
}

// Exhaustive hybrid distance: every partial matching of y tokens to x
// tokens, unmatched y tokens deleted and unmatched x tokens inserted.
// Minimum cost first, then fewest substitutions, then cost / operations.
double HybridOracle(const std::string& y, const std::string& x,
                    const HybridWeights& w) {
  const auto ty = Tokenize(y, w.separator);
  const auto tx = Tokenize(x, w.separator);
  if (ty.empty() && tx.empty()) return 0.0;
  double best_cost = kInf;
  int best_matches = 0;
  int best_ops = 1;
  std::vector<bool> used(tx.size(), false);
  auto recurse = [&](auto&& self, size_t i, double cost, int matches,
                     int ops) -> void {
    if (i == ty.size()) {
      for (size_t j = 0; j < tx.size(); ++j) {
        if (!used[j]) {
          cost += w.insertion * Levenshtein("", tx[j]);
          ++ops;
        }
      }
      const double tol = 1e-12 * (1 + cost);
      if (best_cost == kInf || cost < best_cost - tol ||
          (std::abs(cost - best_cost) <= tol && matches < best_matches)) {
        best_cost = cost;
        best_matches = matches;
        best_ops = ops;
      }
      return;
    }
    self(self, i + 1, cost + w.deletion * Levenshtein(ty[i], ""), matches,
         ops + 1);
    for (size_t j = 0; j < tx.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      self(self, i + 1, cost + w.substitution * Levenshtein(ty[i], tx[j]),
           matches + 1, ops + 1);
      used[j] = false;
    }
  };
  recurse(recurse, 0, 0.0, 0, 0);
  return best_cost / best_ops;
}

TEST_CASE("constant distance is always zero") {
  CHECK(ConstantDistance("a", "b") == 0.0);
  CHECK(ConstantDistance("a", "a") == 0.0);
  CHECK(ConstantDistance("", "anything") == 0.0);
}

TEST_CASE("normalized Levenshtein: worked values") {
  CHECK(NormalizedLevenshtein("abc", "abc") == 0.0);
  CHECK(NormalizedLevenshtein("abc", "abd") == doctest::Approx(1.0 / 3));
  CHECK(NormalizedLevenshtein("", "ab") == 1.0);
  CHECK(NormalizedLevenshtein("", "") == 0.0);
}

TEST_CASE("Levenshtein is a metric on random strings") {
  Rng rng(8);
  for (int k = 0; k < 1000; ++k) {
    const std::string a = RandomString(rng, 8, 4);
    const std::string b = RandomString(rng, 8, 4);
    const std::string c = RandomString(rng, 8, 4);
    CHECK(Levenshtein(a, a) == 0);
    CHECK(Levenshtein(a, b) == Levenshtein(b, a));
    CHECK(Levenshtein(a, c) <= Levenshtein(a, b) + Levenshtein(b, c));
  }
  CHECK(Levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("hybrid distance: worked values") {
  CHECK(HybridDistance("University of California, San Diego",
                       "Univ. Calif., San Diego") == doctest::Approx(2.6));
  CHECK(Levenshtein("University of California, San Diego",
                    "Univ. Calif., San Diego") == 14);
  CHECK(HybridDistance("same words here", "same words here") == 0.0);
  CHECK(HybridDistance("a b", "a") == doctest::Approx(0.5));
  CHECK(HybridDistance("", "") == 0.0);
}

TEST_CASE("hybrid distance matches exhaustive assignment") {
  Rng rng(12);
  for (int trial = 0; trial < 2000; ++trial) {
    HybridWeights w;
    if (trial % 2 == 1) {
      w.insertion = 0.5 + Uniform01(rng);
      w.deletion = 0.5 + Uniform01(rng);
      w.substitution = 0.5 + Uniform01(rng);
    }
    auto phrase = [&] {
      const int tokens = static_cast<int>(Uniform01(rng) * 6);
      std::string s;
      for (int t = 0; t < tokens; ++t) {
        if (t > 0) s.push_back(' ');
        std::string token = RandomString(rng, 4, 3);
        if (token.empty()) token = "q";
        s += token;
      }
      return s;
    };
    const std::string y = phrase();
    const std::string x = phrase();
    CHECK(HybridDistance(y, x, w) ==
          doctest::Approx(HybridOracle(y, x, w)).epsilon(1e-9));
  }
}

TEST_CASE("tokenize drops empty tokens") {
  CHECK(Tokenize("  a  b ", ' ') == std::vector<std::string>{"a", "b"});
  CHECK(Tokenize("", ' ').empty());
}

TEST_CASE("range index: worked queries") {
  const std::vector<std::string> domain = {"abc", "abd", "xyz"};
  DistanceMeasure nl{.kind = DistanceKind::kNormalizedLevenshtein,
                     .cutoff = 0.4};
  const RangeIndex index = RangeIndex::Build(domain, nl);
  const auto hits = index.Query(0);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].value == 0);
  CHECK(hits[0].distance == 0.0);
  CHECK(hits[1].value == 1);
  CHECK(hits[1].distance == doctest::Approx(1.0 / 3));
  CHECK(index.CutDistance(0, 2) == kInf);

  SUBCASE("constant measure returns the whole domain") {
    const RangeIndex constant = RangeIndex::Build(domain, DistanceMeasure{});
    CHECK(constant.Query(2).size() == 3);
    CHECK(constant.complete());
    CHECK(constant.d_min(0) == 0.0);
    CHECK(constant.d_max() == 0.0);
  }
  SUBCASE("infinite cutoff returns the whole domain") {
    DistanceMeasure open{.kind = DistanceKind::kNormalizedLevenshtein};
    const RangeIndex all = RangeIndex::Build(domain, open);
    CHECK(all.Query(1).size() == 3);
    CHECK(all.d_min(0) == doctest::Approx(1.0 / 3));
    CHECK(all.d_max() == doctest::Approx(1.0));
  }
  SUBCASE("singleton domain has no neighbor") {
    const RangeIndex single = RangeIndex::Build({"a"}, nl);
    CHECK(single.d_min(0) == kInf);
  }
}

TEST_CASE("range index equals brute force on a large domain") {
  Rng rng(21);
  std::vector<std::string> domain;
  while (domain.size() < 1000) {
    std::string s = RandomString(rng, 7, 5);
    if (!s.empty()) domain.push_back(s);
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  }
  DistanceMeasure nl{.kind = DistanceKind::kNormalizedLevenshtein,
                     .cutoff = 0.4};
  const RangeIndex index = RangeIndex::Build(domain, nl);
  double d_max = 0;
  for (size_t y = 0; y < domain.size(); ++y) {
    for (size_t x = 0; x < domain.size(); ++x) {
      if (x != y) d_max = std::max(d_max, NormalizedLevenshtein(domain[y], domain[x]));
    }
  }
  CHECK(index.d_max() == d_max);
  for (int q = 0; q < 200; ++q) {
    const ValueId x = static_cast<ValueId>(Uniform01(rng) * domain.size());
    std::vector<std::pair<ValueId, double>> expected, got;
    double d_min = kInf;
    for (ValueId y = 0; y < static_cast<ValueId>(domain.size()); ++y) {
      const double d = NormalizedLevenshtein(domain[y], domain[x]);
      if (d <= 0.4) expected.emplace_back(y, d);
      const double forward = NormalizedLevenshtein(domain[x], domain[y]);
      if (y != x && forward <= 0.4) d_min = std::min(d_min, forward);
    }
    for (const Neighbor& n : index.Query(x)) got.emplace_back(n.value, n.distance);
    CHECK(got == expected);
    CHECK(index.d_min(x) == d_min);
  }
}

TEST_CASE("range index never assumes symmetry") {
  // Growing a string is cheap, shrinking it is not.
  const DistanceFn grow = [](std::string_view y, std::string_view x) {
    return x.size() >= y.size() ? static_cast<double>(x.size() - y.size())
                                : 100.0;
  };
  const std::vector<std::string> domain = {"a", "aa", "aaa", "aaaa"};
  const RangeIndex index = RangeIndex::Build(domain, grow, 1.0);
  for (ValueId x = 0; x < 4; ++x) {
    std::vector<ValueId> expected, got;
    for (ValueId y = 0; y < 4; ++y) {
      if (grow(domain[y], domain[x]) <= 1.0) expected.push_back(y);
    }
    for (const Neighbor& n : index.Query(x)) got.push_back(n.value);
    CHECK(got == expected);
    std::vector<ValueId> forward_expected, forward_got;
    for (ValueId t = 0; t < 4; ++t) {
      if (grow(domain[x], domain[t]) <= 1.0) forward_expected.push_back(t);
    }
    for (const Neighbor& n : index.Forward(x)) forward_got.push_back(n.value);
    CHECK(forward_got == forward_expected);
  }
  CHECK(index.d_min(0) == 1.0);
  CHECK(index.d_min(3) == kInf);
  CHECK(index.d_max() == 100.0);
}

}  // namespace
}  // namespace resolver
