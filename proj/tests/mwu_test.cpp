#include <cmath>

#include "adversary.hpp"
#include "doctest.h"
#include "localflow/mwu.hpp"
#include "oracles.hpp"

using namespace localflow;

TEST_CASE("compute_iterations matches the linear scan") {
  CHECK(compute_iterations(0.25, 1, 0.0) == 76);
  CHECK(compute_iterations(0.25, 1, 0.0) == oracle::iterations_by_scan(0.25, 1, 0.0));
  const auto small = compute_iterations(0.25, 2, 0.0);
  const auto large = compute_iterations(0.25, 2, 1e6);
  CHECK(small == 90);
  CHECK(large == 332);
  CHECK(large > small);
  for (double alpha : {0.25, 0.1, 0.05, 0.01}) {
    for (std::uint64_t j : {1u, 2u, 7u, 400u}) {
      for (double a : {0.0, 1.0, 50.0}) {
        CHECK(compute_iterations(alpha, j, a) == oracle::iterations_by_scan(alpha, static_cast<double>(j), a));
      }
    }
  }
}

TEST_CASE("compute_iterations: halving alpha grows T by 4 to 4.5 once log|J| dominates") {
  for (std::int64_t n : {100, 1000, 10000}) {
    const auto j = static_cast<std::uint64_t>(2 * n);
    const double a = static_cast<double>(n);
    for (double alpha : {0.25, 0.125, 0.0625, 0.03125}) {
      const double ratio = static_cast<double>(compute_iterations(alpha / 2, j, a)) /
                           static_cast<double>(compute_iterations(alpha, j, a));
      CHECK(ratio >= 4.0);
      CHECK(ratio <= 4.5);
    }
  }
  // With tiny |J| the log(T) term inflates the ratio; it still exceeds 4.
  for (std::uint64_t j : {1u, 2u}) {
    for (double alpha : {0.25, 0.125, 0.0625}) {
      CHECK(compute_iterations(alpha / 2, j, 0.0) > 4 * compute_iterations(alpha, j, 0.0));
    }
  }
}

TEST_CASE("compute_iterations rejects bad parameters") {
  CHECK_THROWS_AS(compute_iterations(0.0, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_iterations(0.3, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_iterations(0.1, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_iterations(0.1, 2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_iterations(std::nan(""), 2, 0.0), std::invalid_argument);
}

TEST_CASE("round_weights") {
  const double n = 8.0;
  CHECK(round_weight(n, n) == n);
  CHECK(round_weight(n - 0.5, n) == 0.0);
  WeightLedger w;
  w.set(3, 0.25);
  const RoundedWeights none = round_weights(w, 0.0);
  CHECK(none(3) == 0.25);
  CHECK(none(0) == 1.0);
  const RoundedWeights high = round_weights(w, 2.0);
  CHECK(high(0) == 0.0);
  CHECK(high(3) == 0.0);
}

TEST_CASE("run_mwu with zero gains leaves weights at 1") {
  const auto params = MwuParams::with_iterations(0.25, 5, 0.0, 0.0);
  const auto report = run_mwu(params, [](std::int64_t, const WeightLedger&, const RoundedWeights&) {
    return GainVector{};
  });
  CHECK(report.iterations == params.iterations);
  CHECK(report.average_gain.empty());
  CHECK(report.max_average_gain == 0.0);
  CHECK(report.final_total_weight == 5.0);
}

TEST_CASE("run_mwu: two indices, full gain while both round to zero") {
  for (double alpha : {0.25, 0.125}) {
    const double threshold = 4.0;
    const auto params = MwuParams::with_iterations(alpha, 2, threshold, threshold);
    const auto report = run_mwu(params, [](std::int64_t, const WeightLedger&, const RoundedWeights& wt) {
      if (wt(0) == 0.0 && wt(1) == 0.0) return GainVector{{0, 2.0}, {1, -2.0}};
      // Keep <g, w~> <= 0: push against whichever index is heavy.
      return wt(0) > 0.0 ? GainVector{{0, -1.0}, {1, 1.0}} : GainVector{{0, 1.0}, {1, -1.0}};
    });
    CHECK(report.max_average_gain <= 5 * alpha);
  }
}

TEST_CASE("run_mwu rejects a positive dot product at iteration 1") {
  const auto params = MwuParams::with_iterations(0.25, 2, 0.0, 0.0);
  try {
    run_mwu(params, [](std::int64_t, const WeightLedger&, const RoundedWeights&) {
      return GainVector{{0, 1.0}};  // <g, w~> = 1
    });
    FAIL("violation not detected");
  } catch (const MwuContractViolation& err) {
    CHECK(err.iteration() == 1);
  }
}

TEST_CASE("MwuEngine rejects oversized gains and out-of-range indices without updating") {
  MwuEngine engine(MwuParams::with_iterations(0.25, 4, 10.0, 10.0));
  const GainVector big{{0, 2.5}};
  CHECK_THROWS_AS(engine.step(big), MwuContractViolation);
  const GainVector outside{{9, 1.0}};
  CHECK_THROWS_AS(engine.step(outside), MwuContractViolation);
  CHECK(engine.iteration() == 0);
  CHECK(engine.ledger().materialized_count() == 0);
  const GainVector ok{{1, 2.0}};
  engine.step(ok);
  CHECK(engine.iteration() == 1);
  CHECK(engine.ledger().weight(1) == doctest::Approx(1.5));
}

TEST_CASE("property: compliant adversaries never beat 5 alpha; weights stay positive and bounded") {
  int runs = 0;
  for (std::uint64_t j : {2u, 10u, 100u}) {
    for (double alpha : {0.25, 0.125}) {
      for (double threshold : {0.0, 3.0}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          test::Adversary adversary(j, seed, seed % 2 == 0);
          const auto params = MwuParams::with_iterations(alpha, j, threshold, threshold);
          MwuEngine engine(params);
          for (std::int64_t i = 1; i <= params.iterations; ++i) {
            const GainVector g = adversary.next(engine.ledger(), engine.rounded());
            engine.step(g);
            const double bound = static_cast<double>(j) * (1.0 + 1.5 * static_cast<double>(i) * threshold);
            const double total = engine.ledger().total_weight(j);
            CHECK(total <= bound * (1.0 + 1e-9));
            CHECK(engine.ledger().min_weight() > 0.0);
          }
          for (const auto& [index, avg] : engine.average_gains()) CHECK(avg <= 5 * alpha);
          ++runs;
        }
      }
    }
  }
  CHECK(runs == 120);
}
