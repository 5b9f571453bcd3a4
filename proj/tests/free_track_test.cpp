#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "zeno/coherent_track.hpp"
#include "zeno/free_track.hpp"

using namespace zeno;
using zeno::test::kPi;
using zeno::test::rel_err;

TEST(FreeSurvival, StartsAtOne) {
  EXPECT_DOUBLE_EQ(free_survival(SystemParams{}, DeltaP{1.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(free_survival(SystemParams{}, ThermalP{0.5, 0.0}, 0.0), 1.0);
}

TEST(FreeSurvival, BridgesToOneMeasurement) {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> z(0.0, 1.5);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SystemParams p = zeno::test::random_params(rng);
    const ProjectedKernel k = inspect_kernel(p);
    if (k.regime != Regime::Distilling) continue;
    const cplx a0(z(rng), z(rng));
    const double want = std::exp(survival_log_prob(k, a0, 1));
    EXPECT_LT(rel_err(free_survival(p, DeltaP{a0}, p.tau_bar), want), 1e-10) << trial;
    ++checked;
  }
  EXPECT_GT(checked, 90);
}

TEST(FreeSurvival, StaysInUnitInterval) {
  for (double t = 0.0; t < 20.0; t += 0.37) {
    const double s = free_survival(SystemParams{}, ThermalP{0.5, cplx(0.3, 0.0)}, t);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0 + 1e-14);
  }
}

TEST(FreeMeanQuanta, OscillatesBetweenBounds) {
  const SystemParams p;
  double lo = 1e9, hi = -1e9;
  for (double t = 0.0; t <= 4.0 * kPi; t += 0.01) {
    const double n = free_mean_quanta(p, DeltaP{1.0}, t);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    EXPECT_NEAR(n, free_mean_quanta_coherent(p, 1.0, t), 1e-12);
  }
  EXPECT_NEAR(lo, 1.0, 1e-12);
  EXPECT_NEAR(hi, 1.64, 1e-4);
  EXPECT_NEAR(free_mean_quanta(p, DeltaP{1.0}, kPi), 1.64, 1e-14);
  EXPECT_NEAR(free_mean_quanta(p, DeltaP{0.0}, 0.0), 0.0, 1e-15);
}

TEST(FreeMeanQuanta, ThermalMomentIdentity) {
  const SystemParams p;
  const double want = 0.5 + 4.0 * 0.16 * std::pow(std::sin(0.5), 2);
  EXPECT_NEAR(free_mean_quanta(p, ThermalP{0.5, 0.0}, 1.0), want, 1e-12);
}

TEST(FreeMeanQuanta, IsPeriodic) {
  const SystemParams p;
  for (const double t : {0.3, 1.7, 4.0})
    EXPECT_NEAR(free_mean_quanta(p, DeltaP{cplx(0.4, 1.0)}, t),
                free_mean_quanta(p, DeltaP{cplx(0.4, 1.0)}, t + 2.0 * kPi), 1e-12);
}

TEST(FreeFieldEnsemble, MeanQuantaAgreesWithClosedForm) {
  const SystemParams p;
  const FieldEnsemble e = free_field_ensemble(p, DeltaP{1.0}, 0.9 * kPi);
  double nq = 0.0, w = 0.0;
  for (const auto& row : e.rows) {
    nq += row.weight * std::norm(row.label.alpha);
    w += row.weight;
    EXPECT_EQ(row.label.xi, cplx(0.0, 0.0));
  }
  EXPECT_NEAR(w, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(e.normalization(), 1.0);
  EXPECT_NEAR(nq, free_mean_quanta_coherent(p, 1.0, 0.9 * kPi), 1e-10);
}

TEST(FreeFieldEnsemble, DecoupledIsPureRotation) {
  const SystemParams p{1.0, 0.0, 0.4};
  const FieldEnsemble e = free_field_ensemble(p, DeltaP{cplx(1.0, 0.5)}, 2.3);
  for (const auto& row : e.rows) EXPECT_LT(std::abs(row.label.alpha - cplx(1.0, 0.5) * std::polar(1.0, -2.3)), 1e-14);
}

TEST(FreeFieldEnsemble, FullPeriodReturnsInitialEnsemble) {
  const SystemParams p;
  const FieldEnsemble e = free_field_ensemble(p, CoherentMixtureP{{{0.5, 1.0}, {0.5, cplx(0.0, -1.0)}}}, 4.0 * kPi);
  for (const auto& row : e.rows) {
    const bool first = std::abs(row.label.alpha - 1.0) < 1e-12;
    const bool second = std::abs(row.label.alpha - cplx(0.0, -1.0)) < 1e-12;
    EXPECT_TRUE(first || second) << row.label.alpha;
  }
}

TEST(FreeSeries, RowsFollowTheGrid) {
  const std::vector<double> grid{0.0, 1.0, 2.0 * kPi};
  const auto rows = free_series(SystemParams{}, DeltaP{1.0}, grid);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].survival, 1.0);
  EXPECT_DOUBLE_EQ(rows[0].mean_quanta, 1.0);
  EXPECT_NEAR(rows[2].mean_quanta, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(rows[1].t_bar, 1.0);
}
