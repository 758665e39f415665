#include "maxrep/engine.hpp"
#include "maxrep/errors.hpp"
#include "maxrep/limits.hpp"
#include "maxrep/norming.hpp"
#include "maxrep/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

using namespace maxrep;

namespace {

const DiscreteMarginal kCoin{{1.0, 2.0}, {0.5, 0.5}};

ExperimentSpec small_spec(PerturbationMode mode, LambdaLaw law = PointMassLaw{0.5}) {
  ExperimentSpec spec;
  spec.process = GaussianProcess{};
  spec.selection.lambda_law = law;
  spec.mode = mode;
  spec.n = 200;
  spec.replications = 2000;
  spec.seed = 77;
  spec.workers = 1;
  return spec;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST_CASE("experiment validation") {
  auto spec = small_spec(PerturbationMode::replacing);
  CHECK_NOTHROW(validate(spec));
  spec.n = 0;
  CHECK_THROWS_AS(validate(spec), InvalidParameter);
  spec = small_spec(PerturbationMode::replacing);
  spec.replications = 0;
  CHECK_THROWS_AS(validate(spec), InvalidParameter);
}

TEST_CASE("selection draws") {
  std::vector<std::uint8_t> eps(1000);
  const StreamKey key{3, 0, StreamTag::base_path, 0};
  CHECK(draw_selection(SelectionSpec{PointMassLaw{1.0}, ConditionallyIid{}}, key, eps) == 1.0);
  CHECK(std::accumulate(eps.begin(), eps.end(), 0) == 1000);
  CHECK(draw_selection(SelectionSpec{PointMassLaw{0.0}, ConditionallyIid{}}, key, eps) == 0.0);
  CHECK(std::accumulate(eps.begin(), eps.end(), 0) == 0);
  draw_selection(SelectionSpec{PointMassLaw{0.5}, PeriodicPattern{{1, 0}}}, key, eps);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    REQUIRE(eps[i] == (i % 2 == 0 ? 1 : 0));
  }
  // S_n / n tracks the drawn lambda.
  std::vector<std::uint8_t> big(100000);
  for (std::uint64_t r = 0; r < 20; ++r) {
    const double lambda =
        draw_selection(SelectionSpec{Uniform01Law{}, ConditionallyIid{}}, StreamKey{3, r, StreamTag::base_path, 0}, big);
    const double frac = std::accumulate(big.begin(), big.end(), 0.0) / static_cast<double>(big.size());
    CHECK(std::abs(frac - lambda) < 0.01);
  }
}

TEST_CASE("replication examples") {
  const auto norming = gaussian_norming(500);
  const StreamKey key{5, 0, StreamTag::base_path, 0};
  SUBCASE("all observed: perturbed equals original") {
    for (std::uint64_t r = 0; r < 20; ++r) {
      const auto o = run_replication(GaussianProcess{Ar1Covariance{0.5}}, SelectionSpec{PointMassLaw{1.0}, {}},
                                     PerturbationMode::replacing, 500, norming, StreamKey{5, r});
      REQUIRE(o.m_perturbed.has_value());
      CHECK(*o.m_perturbed == o.m_original);
      CHECK(o.s_n_over_n == 1.0);
    }
    const auto p = run_replication(GaussianProcess{}, SelectionSpec{PointMassLaw{1.0}, PeriodicPattern{{1}}},
                                   PerturbationMode::replacing, 500, norming, key);
    CHECK(*p.m_perturbed == p.m_original);
  }
  SUBCASE("all missing: perturbed maximum lies below everything") {
    const auto o = run_replication(GaussianProcess{}, SelectionSpec{PointMassLaw{0.0}, {}},
                                   PerturbationMode::missing, 500, norming, key);
    CHECK_FALSE(o.m_perturbed.has_value());
    CHECK(o.perturbed_at_most(-1e300));
  }
  SUBCASE("all replaced: perturbed maximum comes from an independent copy") {
    const Simulator sim(GaussianProcess{}, SelectionSpec{PointMassLaw{0.0}, {}}, PerturbationMode::replacing, 50, 9);
    const auto raw = sim.run(100000, 1);
    std::vector<double> a, b;
    for (const auto& o : raw) {
      a.push_back(*o.max_perturbed);
      b.push_back(o.max_original);
    }
    CHECK(std::abs(correlation(a, b)) < 4.0 / std::sqrt(100000.0));
  }
  SUBCASE("missing mode never exceeds the original") {
    const Simulator sim(GaussianProcess{}, SelectionSpec{Uniform01Law{}, {}}, PerturbationMode::missing, 100, 4);
    for (const auto& o : sim.run(2000, 1)) {
      if (o.max_perturbed) {
        CHECK(*o.max_perturbed <= o.max_original);
      }
    }
  }
}

TEST_CASE("tabulation indicator logic") {
  const EvalGrid grid{{-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}};
  SUBCASE("outcome above the grid counts nowhere") {
    const std::vector<ReplicationOutcome> out = {{5.0, 5.0, 0.5, 0.5}};
    const auto e = tabulate(out, grid);
    CHECK(std::all_of(e.counts.begin(), e.counts.end(), [](auto c) { return c == 0; }));
  }
  SUBCASE("outcome below the grid counts everywhere") {
    const std::vector<ReplicationOutcome> out = {{-5.0, -5.0, 0.5, 0.5}};
    const auto e = tabulate(out, grid);
    CHECK(std::all_of(e.counts.begin(), e.counts.end(), [](auto c) { return c == 1; }));
  }
  SUBCASE("missing marker is below every x") {
    const std::vector<ReplicationOutcome> out = {{std::nullopt, 0.0, 0.0, 0.0}};
    const auto e = tabulate(out, grid);
    CHECK(e.counts[grid.index(0, 0)] == 0);
    CHECK(e.counts[grid.index(0, 1)] == 1);
    CHECK(e.counts[grid.index(0, 2)] == 1);
  }
  SUBCASE("ties count as at-most") {
    const std::vector<ReplicationOutcome> out = {{0.0, 1.0, 0.5, 0.5}};
    const auto e = tabulate(out, grid);
    CHECK(e.counts[grid.index(1, 2)] == 1);
    CHECK(e.counts[grid.index(1, 1)] == 0);
  }
}

TEST_CASE("joint ecdf is monotone and missing mode collapses for x >= y") {
  const auto spec = small_spec(PerturbationMode::missing);
  const auto grid = EvalGrid::square(EvalGrid::range(-2.0, 0.5, 3.0));
  const auto e = estimate_joint_cdf(spec, gaussian_norming(spec.n), grid);
  CHECK(e.replications == spec.replications);
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      CHECK(e.counts[grid.index(i, j)] <= e.replications);
      if (i > 0) {
        CHECK(e.counts[grid.index(i, j)] >= e.counts[grid.index(i - 1, j)]);
      }
      if (j > 0) {
        CHECK(e.counts[grid.index(i, j)] >= e.counts[grid.index(i, j - 1)]);
      }
      if (grid.xs[i] >= grid.ys[j]) {
        CHECK(e.counts[grid.index(i, j)] == e.counts[grid.index(grid.rows() - 1, j)]);
      }
    }
  }
}

TEST_CASE("comparison against a limit surface") {
  SUBCASE("single cell arithmetic") {
    JointEcdf e{EvalGrid{{0.0}, {0.0}}, {30}, 100};
    LimitSurface s{EvalGrid{{0.0}, {0.0}}, {0.31}, LimitLaw::replacing};
    const auto c = compare(e, s);
    CHECK(c.sup_distance == doctest::Approx(0.01));
    CHECK(c.deviations[0] == doctest::Approx(-0.01));
    CHECK(c.mc_standard_error == doctest::Approx(std::sqrt(0.3 * 0.7 / 100.0)));
  }
  SUBCASE("identical surfaces") {
    JointEcdf e{EvalGrid{{0.0, 1.0}, {0.0}}, {1, 3}, 4};
    LimitSurface s{EvalGrid{{0.0, 1.0}, {0.0}}, {0.25, 0.75}, LimitLaw::replacing};
    CHECK(compare(e, s).sup_distance == 0.0);
  }
  SUBCASE("mismatched grids") {
    JointEcdf e{EvalGrid{{0.0}, {0.0}}, {1}, 1};
    LimitSurface s{EvalGrid{{1.0}, {0.0}}, {0.5}, LimitLaw::replacing};
    CHECK_THROWS_AS(compare(e, s), GridMismatch);
  }
}

TEST_CASE("marginal check with full observation") {
  auto spec = small_spec(PerturbationMode::replacing, PointMassLaw{1.0});
  const auto m = marginal_check(spec, gaussian_norming(spec.n), EvalGrid::range(-2.0, 0.5, 3.0));
  CHECK(m.empirical_perturbed == m.empirical_original);
  CHECK(m.sup_perturbed == m.sup_original);
  CHECK(m.theory_perturbed[4] == doctest::Approx(gumbel_cdf(0.0)));
}

TEST_CASE("worker count never changes results") {
  auto spec = small_spec(PerturbationMode::replacing, Uniform01Law{});
  const auto norming = gaussian_norming(spec.n);
  const auto grid = EvalGrid::square(EvalGrid::range(-2.0, 0.5, 3.0));
  spec.workers = 1;
  const auto one = estimate_joint_cdf(spec, norming, grid);
  spec.workers = 8;
  const auto eight = estimate_joint_cdf(spec, norming, grid);
  CHECK(one.counts == eight.counts);

  DPrimeOptions opt{500, 3, 1};
  const double d1 = dprime_diagnostic(GaussianProcess{}, 2000, 10, 0.0, gaussian_norming(2000), opt);
  opt.workers = 7;
  CHECK(dprime_diagnostic(GaussianProcess{}, 2000, 10, 0.0, gaussian_norming(2000), opt) == d1);
}

TEST_CASE("D' diagnostic edge cases") {
  const auto norming = gaussian_norming(100);
  const DPrimeOptions opt{100, 1, 1};
  CHECK(dprime_diagnostic(GaussianProcess{}, 100, 51, 0.0, norming, opt) == 0.0);
  CHECK(dprime_diagnostic(GaussianProcess{}, 100, 100, 0.0, norming, opt) == 0.0);
  CHECK_THROWS_AS(dprime_diagnostic(GaussianProcess{}, 100, 1, 0.0, norming, opt), InvalidParameter);
  // A very low threshold is exceeded everywhere: every pair counts, so the
  // estimate is n * (floor(n/k) - 1).
  CHECK(dprime_diagnostic(GaussianProcess{}, 100, 10, 0.0, explicit_norming(1.0, -50.0, 100), opt) ==
        doctest::Approx(100.0 * 9.0));
}

TEST_CASE("brute-force oracle hand values") {
  CHECK(brute_force_joint_cdf(kCoin, {1, 0}, PerturbationMode::replacing, 1.0, 1.0) == doctest::Approx(0.125));
  CHECK(brute_force_joint_cdf(kCoin, {1, 1}, PerturbationMode::replacing, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(brute_force_joint_cdf(kCoin, {1, 0}, PerturbationMode::missing, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(brute_force_joint_cdf(kCoin, {0, 0}, PerturbationMode::missing, 0.0, 2.0) == doctest::Approx(1.0));
  CHECK(brute_force_joint_cdf(kCoin, {1, 0}, PerturbationMode::replacing, 2.0, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(brute_force_joint_cdf(kCoin, {1, 0, 1, 0, 1, 0, 1}, PerturbationMode::missing, 1.0, 1.0),
                  InvalidParameter);
  // 100^6 * 100^3 paths exceed the enumeration budget.
  DiscreteMarginal wide;
  for (int i = 0; i < 100; ++i) {
    wide.values.push_back(i);
    wide.probs.push_back(0.01);
  }
  CHECK_THROWS_AS(brute_force_joint_cdf(wide, {1, 0, 1, 0, 1, 0}, PerturbationMode::replacing, 1.0, 1.0),
                  SupportTooLarge);
}

TEST_CASE("engine agrees with the oracle on a small case") {
  const std::vector<std::uint8_t> pattern = {1, 0, 1};
  ExperimentSpec spec;
  spec.process = GenericIidProcess{DiscreteMarginal{{0.0, 1.0, 2.0}, {0.3, 0.3, 0.4}}};
  spec.selection = SelectionSpec{PointMassLaw{2.0 / 3.0}, PeriodicPattern{pattern}};
  spec.n = 3;
  spec.replications = 200000;
  spec.seed = 5;
  spec.workers = 1;
  const auto& marginal = std::get<DiscreteMarginal>(std::get<GenericIidProcess>(spec.process).marginal);
  const EvalGrid grid{{0.0, 1.0}, {1.0, 2.0}};
  for (auto mode : {PerturbationMode::replacing, PerturbationMode::missing}) {
    spec.mode = mode;
    const auto e = estimate_joint_cdf(spec, explicit_norming(1.0, 0.0, 3), grid);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const double exact = brute_force_joint_cdf(marginal, pattern, mode, grid.xs[i], grid.ys[j]);
        const double se = std::sqrt(exact * (1.0 - exact) / spec.replications);
        CAPTURE(exact);
        CHECK(std::abs(e.value(i, j) - exact) <= 4.0 * se + 1e-12);
      }
    }
  }
}
