#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support.hpp"
#include "zeno/coherent_track.hpp"
#include "zeno/free_track.hpp"
#include "zeno/iterates.hpp"

using namespace zeno;
using zeno::test::kPi;
using zeno::test::rel_err;

namespace {

const ProjectedKernel& reference() {
  static const ProjectedKernel k = derive_kernel(SystemParams{});
  return k;
}

FockVector target_vector() { return squeezed_vacuum_vector(target_squeeze(reference()).xi(), 80); }

}  // namespace

TEST(CoherentTrack, ObservablesMatchOracle) {
  const FockVector target = target_vector();
  for (const cplx a0 : {cplx(1.0, 0.0), cplx(0.5, -0.8)}) {
    const auto oracle = oracle_trajectory(zeno::test::reference_v(), pure_density(coherent_vector(a0, 80)), 10, target);
    for (std::int64_t n = 1; n <= 10; ++n) {
      const auto& o = oracle[static_cast<std::size_t>(n)];
      EXPECT_LT(rel_err(std::exp(survival_log_prob(reference(), a0, n)), o.probability), 1e-6) << n;
      EXPECT_LT(rel_err(fidelity_to_target(reference(), a0, n), o.fidelity), 1e-6) << n;
      EXPECT_LT(rel_err(mean_quanta(reference(), a0, n), o.mean_quanta), 1e-6) << n;
    }
  }
}

TEST(CoherentTrack, AbsZetaVariantDisagreesWithOracle) {
  // sinh^2 r_N + |alpha_N|^2 is confirmed above; |zeta_N| / (1 - |zeta_N|^2) + |alpha_N|^2 is not.
  const auto oracle =
      oracle_trajectory(zeno::test::reference_v(), pure_density(coherent_vector(0.0, 80)), 5, target_vector());
  for (std::int64_t n = 1; n <= 5; ++n) {
    const double alt = mean_quanta_abs_zeta_variant(reference(), 0.0, n);
    EXPECT_GT(rel_err(alt, oracle[static_cast<std::size_t>(n)].mean_quanta), 0.5) << n;
    const double z = std::abs(step_closure(reference(), n).zeta_N);
    EXPECT_NEAR(alt, z / (1.0 - z * z), 1e-14);
  }
}

TEST(CoherentTrack, SurvivalDecaysStrictly) {
  double prev = 0.0;
  for (std::int64_t n = 1; n <= 60; ++n) {
    const double lp = survival_log_prob(reference(), 1.0, n);
    EXPECT_LT(lp, prev) << n;
    prev = lp;
  }
  EXPECT_LT(std::exp(prev), 1e-10);
}

TEST(CoherentTrack, DistillsToTarget) {
  EXPECT_GT(fidelity_to_target(reference(), 1.0, 100), 1.0 - 1e-12);
  EXPECT_NEAR(fidelity_to_target(reference(), 0.0, 200), 1.0, 1e-13);
  EXPECT_NEAR(mean_quanta(reference(), 0.0, 200), target_squeeze(reference()).mean_quanta(), 1e-13);
  // The fidelity climbs fast after a few measurements.
  EXPECT_LT(fidelity_to_target(reference(), 1.0, 1), 0.7);
  EXPECT_GT(fidelity_to_target(reference(), 1.0, 6), 0.99);
}

TEST(CoherentTrack, FidelityStaysInUnitInterval) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> z(0.0, 2.0);
  std::uniform_int_distribution<int> steps(1, 80);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ProjectedKernel k = inspect_kernel(zeno::test::random_params(rng));
    if (k.regime != Regime::Distilling) continue;
    const double f = fidelity_to_target(k, cplx(z(rng), z(rng)), steps(rng));
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 900);
}

TEST(CoherentTrack, SeriesRowsMatchSingleValues) {
  const auto rows = distill_series(reference(), cplx(1.0, 0.3), 12);
  ASSERT_EQ(rows.size(), 12u);
  for (const std::size_t i : {0u, 5u, 11u}) {
    const std::int64_t n = static_cast<std::int64_t>(i) + 1;
    EXPECT_EQ(rows[i].n, n);
    EXPECT_DOUBLE_EQ(rows[i].log_p, survival_log_prob(reference(), cplx(1.0, 0.3), n));
    EXPECT_DOUBLE_EQ(rows[i].fidelity, fidelity_to_target(reference(), cplx(1.0, 0.3), n));
    EXPECT_DOUBLE_EQ(rows[i].mean_quanta, mean_quanta(reference(), cplx(1.0, 0.3), n));
    const SqueezedCoherentLabel s = evolved_state(reference(), cplx(1.0, 0.3), n);
    EXPECT_EQ(rows[i].state.alpha, s.alpha);
    EXPECT_EQ(rows[i].state.xi, s.xi);
  }
}

TEST(ZenoSeries, FreezesTheInitialState) {
  std::vector<std::int64_t> ns;
  for (int k = 4; k <= 12; ++k) ns.push_back(std::int64_t{1} << k);
  const auto rows = zeno_series(SystemParams{}, 0.9 * kPi, 1.0, ns);
  ASSERT_EQ(rows.size(), ns.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(rows[i].ok());
    EXPECT_DOUBLE_EQ(rows[i].tau_bar, 0.9 * kPi / static_cast<double>(ns[i]));
    if (i > 0) {
      EXPECT_LT(-std::expm1(rows[i].log_p), -std::expm1(rows[i - 1].log_p));
    }
  }
  EXPECT_GE(std::exp(rows.back().log_p), 0.999);
  EXPECT_GE(rows.back().fidelity, 0.999);
}

TEST(ZenoSeries, VacuumLimitIsVacuum) {
  const std::vector<std::int64_t> ns{4096};
  const auto rows = zeno_series(SystemParams{}, 0.9 * kPi, 0.0, ns);
  EXPECT_GT(rows[0].fidelity, 0.999);
}

TEST(ZenoSeries, FiniteStepMatchesOracle) {
  const double t_bar = 0.9 * kPi;
  const std::vector<std::int64_t> ns{64};
  const auto row = zeno_series(SystemParams{}, t_bar, 1.0, ns).front();
  const SystemParams p = SystemParams{}.with_tau(t_bar / 64.0);
  const FockMatrix v = projected_v_matrix(p, 60);
  const FockVector rotated = coherent_vector(std::polar(1.0, -t_bar), 60);
  const auto o = oracle_observables(v, pure_density(coherent_vector(1.0, 60)), 64, rotated);
  EXPECT_LT(rel_err(std::exp(row.log_p), o.probability), 1e-6);
  EXPECT_LT(rel_err(row.fidelity, o.fidelity), 1e-6);
}

TEST(ZenoSeries, BadRegimeRowsAreFlaggedNotFatal) {
  // t_bar = 4 pi with N = 2 puts tau_bar at 2 pi, where G vanishes.
  const std::vector<std::int64_t> ns{1, 2, 3};
  const auto rows = zeno_series(SystemParams{}, 4.0 * kPi, 1.0, ns);
  EXPECT_EQ(rows[1].regime, Regime::Degenerate);
  EXPECT_TRUE(std::isnan(rows[1].log_p));
  EXPECT_TRUE(rows[2].ok());
}

TEST(ZenoOrdering, AntiZenoAtLongIntervals) {
  const SystemParams p;
  bool accelerated = false;
  for (std::int64_t n = 1; n <= 10; ++n) {
    const double p0 = free_survival(p, DeltaP{1.0}, static_cast<double>(n) * p.tau_bar);
    accelerated = accelerated || std::exp(survival_log_prob(reference(), 1.0, n)) < p0;
  }
  EXPECT_TRUE(accelerated);
}

TEST(ZenoOrdering, SuppressedDecayAtShortIntervals) {
  const SystemParams p = SystemParams{}.with_tau(0.0045 * kPi);
  const ProjectedKernel k = derive_kernel(p);
  for (std::int64_t n = 1; static_cast<double>(n) * p.tau_bar <= 3.0 * kPi; n += 7) {
    const double p0 = free_survival(p, DeltaP{1.0}, static_cast<double>(n) * p.tau_bar);
    EXPECT_GE(std::exp(survival_log_prob(k, 1.0, n)), p0 - 1e-12) << n;
  }
}

TEST(NonExponentialDecay, CurvatureGrowsWithAmplitude) {
  auto max_curvature = [&](double a0) {
    double worst = 0.0;
    for (std::int64_t n = 2; n < 20; ++n) {
      const double d2 = survival_log_prob(reference(), a0, n + 1) - 2.0 * survival_log_prob(reference(), a0, n) +
                        survival_log_prob(reference(), a0, n - 1);
      worst = std::max(worst, std::abs(d2));
    }
    return worst;
  };
  const double c0 = max_curvature(0.0), c2 = max_curvature(2.0), c4 = max_curvature(4.0);
  EXPECT_GT(c2, 0.0);
  EXPECT_LT(c0, c2);
  EXPECT_LT(c2, c4);
}
