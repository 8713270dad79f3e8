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
#include <map>
#include <numeric>
#include <vector>

#include "resolver/ep_partition.hpp"
#include "resolver/model.hpp"
#include "test_util.hpp"

namespace resolver {
namespace {

std::vector<EpPrior> OnePointPerRegime() {
  return {EpPrior::PitmanYor(0.4, 1.3), EpPrior::Ewens(0.8),
          EpPrior::GenCoupon(0.7, 6), EpPrior::CouponFixed(5)};
}

TEST_CASE("seat probabilities: worked values") {
  SUBCASE("Pitman-Yor sizes {2,1}") {
    const auto p = SeatProbabilities(ViewOfSizes({2, 1}),
                                     EpPrior::PitmanYor(0.5, 1.0));
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.375));
    CHECK(p[1] == doctest::Approx(0.125));
    CHECK(p[2] == doctest::Approx(0.5));
  }
  SUBCASE("Ewens sizes {1,1}") {
    const auto p = SeatProbabilities(ViewOfSizes({1, 1}), EpPrior::Ewens(1.0));
    for (double v : p) CHECK(v == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("first customer always opens a cluster") {
    for (const EpPrior& ep : OnePointPerRegime()) {
      const auto p = SeatProbabilities(ViewOfSizes({}), ep);
      REQUIRE(p.size() == 1);
      CHECK(p[0] == doctest::Approx(1.0));
    }
  }
  SUBCASE("generalized coupon with every slot used cannot open a cluster") {
    const auto p =
        SeatProbabilities(ViewOfSizes({1, 2}), EpPrior::GenCoupon(1.0, 2));
    CHECK(p.back() == 0.0);
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
  }
  SUBCASE("fixed coupon is the large-kappa limit") {
    const auto fixed =
        SeatProbabilities(ViewOfSizes({3, 1}), EpPrior::CouponFixed(7));
    const auto limit =
        SeatProbabilities(ViewOfSizes({3, 1}), EpPrior::GenCoupon(1e9, 7));
    REQUIRE(fixed.size() == limit.size());
    for (size_t k = 0; k < fixed.size(); ++k) {
      CHECK(fixed[k] == doctest::Approx(limit[k]).epsilon(1e-7));
    }
    CHECK(fixed[0] == doctest::Approx(1.0 / 7));
    CHECK(fixed[2] == doctest::Approx(5.0 / 7));
  }
}

TEST_CASE("seat probabilities sum to one for random states") {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Index> sizes;
    const int e = 1 + static_cast<int>(Uniform01(rng) * 8);
    for (int k = 0; k < e; ++k) sizes.push_back(1 + static_cast<Index>(Uniform01(rng) * 6));
    const PartitionView view = ViewOfSizes(sizes);
    const std::vector<EpPrior> priors = {
        EpPrior::PitmanYor(0.01 + 0.98 * Uniform01(rng), 0.1 + 5 * Uniform01(rng)),
        EpPrior::Ewens(0.1 + 5 * Uniform01(rng)),
        EpPrior::GenCoupon(0.05 + 3 * Uniform01(rng), e + static_cast<int>(Uniform01(rng) * 5)),
        EpPrior::CouponFixed(e + static_cast<int>(Uniform01(rng) * 5))};
    for (const EpPrior& ep : priors) {
      const auto p = SeatProbabilities(view, ep);
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("partition probabilities: worked values") {
  const std::vector<Index> three = {0, 0, 0};
  CHECK(LogPartitionProb(three, EpPrior::Ewens(1.0)) ==
        doctest::Approx(std::log(1.0 / 3.0)));
  const std::vector<Index> one = {0};
  for (const EpPrior& ep : OnePointPerRegime()) {
    CHECK(LogPartitionProb(one, ep) == doctest::Approx(0.0));
  }
  // Sequential: 1 * kappa(m-1)/(1+m kappa) = 1/3; closed form:
  // (2)(1) / ((2)(3)) * 1 * 1.
  const std::vector<Index> two = {0, 1};
  const EpPrior gc = EpPrior::GenCoupon(1.0, 2);
  CHECK(LogPartitionProb(two, gc) == doctest::Approx(std::log(1.0 / 3.0)));
  CHECK(LogSequentialProb(two, gc) == doctest::Approx(std::log(1.0 / 3.0)));
  const std::vector<Index> too_many = {0, 1, 2};
  CHECK(LogPartitionProb(too_many, gc) == kNegInf);
}

TEST_CASE("partition probabilities sum to one over all set partitions") {
  for (int n = 1; n <= 7; ++n) {
    const auto partitions = testing::SetPartitions(n);
    for (const EpPrior& ep : OnePointPerRegime()) {
      double total = 0;
      for (const auto& links : partitions) {
        total += std::exp(LogPartitionProb(links, ep));
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("partition probabilities are exchangeable") {
  Rng rng(17);
  for (const EpPrior& ep : OnePointPerRegime()) {
    std::vector<Index> links = SamplePartition(12, ep, rng);
    const double reference = LogPartitionProb(links, ep);
    for (int k = 0; k < 100; ++k) {
      std::shuffle(links.begin(), links.end(), rng);
      CHECK(std::abs(LogPartitionProb(links, ep) - reference) < 1e-10);
      CHECK(std::abs(LogSequentialProb(links, ep) - reference) < 1e-10);
    }
  }
}

TEST_CASE("generalized coupon closed form matches the sequential product") {
  Rng rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    const double kappa = std::exp(-3 + 6 * Uniform01(rng));
    const Index n = 1 + static_cast<Index>(Uniform01(rng) * 60);
    const std::int64_t m = 1 + static_cast<std::int64_t>(Uniform01(rng) * 80);
    const EpPrior ep = EpPrior::GenCoupon(kappa, m);
    const auto links = SamplePartition(n, ep, rng);
    const double closed = LogGenCouponEppf(ViewOf(links), kappa, m);
    const double sequential = LogSequentialProb(links, ep);
    CHECK(std::abs(closed - sequential) <=
          1e-9 * std::max(1.0, std::abs(sequential)));
  }
}

TEST_CASE("sampled partitions: worked frequencies") {
  Rng rng(2);
  CHECK(SamplePartition(1, EpPrior::Ewens(1.0), rng) == std::vector<Index>{0});
  const int n = 1000000;
  int together = 0, apart = 0;
  for (int k = 0; k < n; ++k) {
    const auto links = SamplePartition(3, EpPrior::Ewens(1.0), rng);
    together += links[0] == links[1] && links[1] == links[2];
    apart += links[0] != links[1] && links[1] != links[2] && links[0] != links[2];
  }
  CHECK(testing::BinomialZ(together, n, 1.0 / 3) < 3);
  CHECK(testing::BinomialZ(apart, n, 1.0 / 6) < 3);
}

TEST_CASE("sampled partitions label clusters by first appearance") {
  Rng rng(9);
  for (int k = 0; k < 100; ++k) {
    const auto links = SamplePartition(20, EpPrior::PitmanYor(0.3, 2.0), rng);
    CHECK(links == testing::FirstAppearance(links));
  }
}

TEST_CASE("sampled partitions are reproducible per seed") {
  Rng a(99), b(99);
  const EpPrior ep = EpPrior::GenCoupon(0.5, 40);
  CHECK(SamplePartition(50, ep, a) == SamplePartition(50, ep, b));
}

TEST_CASE("empirical partition pmf of [4] matches the exact pmf") {
  Rng rng(31);
  const auto partitions = testing::SetPartitions(4);
  const int n = 200000;
  for (const EpPrior& ep : OnePointPerRegime()) {
    std::map<std::vector<Index>, int> counts;
    for (int k = 0; k < n; ++k) ++counts[SamplePartition(4, ep, rng)];
    for (const auto& links : partitions) {
      const double p = std::exp(LogPartitionProb(links, ep));
      CHECK(testing::BinomialZ(counts[links], n, p) < 4);
    }
  }
}

TEST_CASE("parameter updates respect their supports") {
  Rng rng(4);
  const std::vector<Index> links = {0, 0, 1, 2, 2, 2, 3};
  const PartitionView view = ViewOf(links);
  EpPrior gc = EpPrior::GenCoupon(1.0, 10);
  EpPrior py = EpPrior::PitmanYor(0.5, 1.0);
  EpPrior ew = EpPrior::Ewens(2.0);
  for (int k = 0; k < 2000; ++k) {
    gc = UpdateGenCouponParams(view, gc, rng);
    CHECK(gc.m >= view.num_clusters());
    CHECK(gc.kappa > 0);
    py = UpdatePyParams(view, py, rng);
    CHECK(py.sigma > 0);
    CHECK(py.sigma < 1);
    CHECK(py.alpha > 0);
    ew = UpdatePyParams(view, ew, rng);
    CHECK(ew.sigma == 0.0);
    CHECK(ew.alpha > 0);
  }
}

TEST_CASE("a single record leaves the parameters unchanged") {
  Rng rng(4);
  const std::vector<Index> one = {0};
  const EpPrior py = EpPrior::PitmanYor(0.25, 3.0);
  const EpPrior next = UpdatePyParams(ViewOf(one), py, rng);
  CHECK(next.sigma == py.sigma);
  CHECK(next.alpha == py.alpha);
  const EpPrior gc = EpPrior::GenCoupon(2.0, 5);
  const EpPrior gc_next = UpdateGenCouponParams(ViewOf(one), gc, rng);
  CHECK(gc_next.kappa == gc.kappa);
  CHECK(gc_next.m == gc.m);
}

TEST_CASE("fixed coupon parameters never move") {
  Rng rng(4);
  const std::vector<Index> links = {0, 1, 1};
  const EpPrior fixed = EpPrior::CouponFixed(9);
  CHECK(UpdateEpParams(ViewOf(links), fixed, rng).m == 9);
}

TEST_CASE("default hyperparameters") {
  SUBCASE("N = 1000") {
    const auto defaults = DefaultHyperparameters(
        1000, 2, {AttributeSpec{.name = "a", .domain = {"x", "y"}}});
    const AttributeSpec& spec = defaults.specs[0];
    REQUIRE(spec.distortion_prior.size() == 2);
    CHECK(spec.distortion_prior[1].shape0 == 1.0);
    CHECK(spec.distortion_prior[1].shape1 == 4.0);
    CHECK(spec.rho_prior.shape == 2.0);
    CHECK(spec.rho_prior.rate == 1e-4);
    CHECK(spec.entity_concentration == 1.0);
    CHECK(spec.entity_base.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(defaults.ep.regime == EpRegime::kGenCoupon);
    CHECK(defaults.ep.hyper.chi0 == 1.0);
    CHECK(defaults.ep.hyper.chi1 == 1e-2);
    CHECK(defaults.ep.hyper.zeta0 == 1.0);
    CHECK(defaults.ep.hyper.zeta1 == 1.0);
    CHECK(defaults.ep.hyper.nu == doctest::Approx(9.99e-4).epsilon(1e-12));
    CHECK(defaults.ep.hyper.r ==
          doctest::Approx(999 * 9.99e-4 / (1 - 9.99e-4)).epsilon(1e-12));
    CHECK(defaults.ep.hyper.r == doctest::Approx(0.999).epsilon(1e-5));
  }
  SUBCASE("N = 2") {
    const EpHyper h = GenCouponHyper(2);
    CHECK(h.nu == doctest::Approx(0.25));
    CHECK(h.r == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("N = 0 is rejected") {
    CHECK_THROWS_AS(DefaultHyperparameters(0, 1, {}), InvalidInput);
  }
}

TEST_CASE("shifted negative binomial prior on m has mean N and variance N^2") {
  for (Index records : {2, 20}) {
    EpPrior ep = DefaultHyperparameters(records, 1, {}).ep;
    Rng rng(static_cast<std::uint64_t>(records));
    const int n = 1000000;
    std::vector<double> draws(n);
    double mean = 0;
    for (int k = 0; k < n; ++k) {
      draws[k] = static_cast<double>(SampleEpPrior(ep, rng).m);
      mean += draws[k] / n;
    }
    double m2 = 0, m4 = 0;
    for (double x : draws) {
      const double d = (x - mean) * (x - mean);
      m2 += d / n;
      m4 += d * d / n;
    }
    const double target_var = static_cast<double>(records) * records;
    CHECK(std::abs(mean - records) < 3 * std::sqrt(m2 / n));
    CHECK(std::abs(m2 - target_var) < 3 * std::sqrt((m4 - m2 * m2) / n));
  }
}

}  // namespace
}  // namespace resolver
