#include <gtest/gtest.h>

#include <cmath>

#include "lnf/dispersion.hpp"
#include "lnf/error.hpp"
#include "support/compare.hpp"

using testing_support::rel_err;

namespace {

const lnf::GapAnchor kNarrow{1.5, 4.725e9};
const lnf::GapAnchor kWide{3.0, 4.275e9};

// Direct solve of the two anchor equations.
double oracle_ft(const lnf::GapAnchor& a, const lnf::GapAnchor& b) {
  const double g1 = a.gap_um * a.gap_um, g2 = b.gap_um * b.gap_um;
  return std::sqrt((a.fs_hz * a.fs_hz * g1 - b.fs_hz * b.fs_hz * g2) / (g1 - g2));
}

}  // namespace

TEST(Calibrate, MatchesDirectSolve) {
  const auto m = lnf::calibrate(kNarrow, kWide);
  const double ft = oracle_ft(kNarrow, kWide);
  const double clat = kNarrow.gap_um * std::sqrt(kNarrow.fs_hz * kNarrow.fs_hz - ft * ft);
  EXPECT_LE(rel_err(m.f_t_hz, ft), 1e-12);
  EXPECT_LE(rel_err(m.c_lat_hz_um, clat), 1e-12);
  EXPECT_NEAR(m.f_t_hz, 4.11407e9, 1e4);
  EXPECT_NEAR(m.c_lat_hz_um, 3.48569e9, 1e4);
}

TEST(Calibrate, ReproducesAnchors) {
  const auto m = lnf::calibrate(kWide, kNarrow);
  EXPECT_LE(rel_err(m.fs_from_gap(1.5), 4.725e9), 1e-12);
  EXPECT_LE(rel_err(m.fs_from_gap(3.0), 4.275e9), 1e-12);
}

TEST(Calibrate, RejectsDegenerateAnchors) {
  EXPECT_THROW(lnf::calibrate({1.5, 4.5e9}, {3.0, 4.5e9}), lnf::InputError);
  EXPECT_THROW(lnf::calibrate({1.5, 4.2e9}, {3.0, 4.5e9}), lnf::InputError);
  EXPECT_THROW(lnf::calibrate({1.5, 4.7e9}, {1.5, 4.2e9}), lnf::InputError);
  EXPECT_THROW(lnf::calibrate({-1.5, 4.7e9}, {3.0, 4.2e9}), lnf::InputError);
}

TEST(FsFromGap, AsymptoteAndMonotone) {
  const auto m = lnf::calibrate(kNarrow, kWide);
  EXPECT_LE(rel_err(m.fs_from_gap(1e9), m.f_t_hz), 1e-12);
  const double mid = m.fs_from_gap(2.25);
  EXPECT_LT(mid, 4.725e9);
  EXPECT_GT(mid, 4.275e9);
  double prev = INFINITY;
  for (double g = 0.2; g < 20.0; g *= 1.1) {
    const double f = m.fs_from_gap(g);
    EXPECT_LT(f, prev);
    prev = f;
  }
  EXPECT_THROW(m.fs_from_gap(0.0), lnf::DomainError);
  EXPECT_THROW(m.fs_from_gap(-1.0), lnf::DomainError);
}

TEST(GapForTarget, InverseAndErrors) {
  const auto m = lnf::calibrate(kNarrow, kWide);
  EXPECT_LE(rel_err(m.gap_for_target(4.725e9), 1.5), 1e-12);
  const double g = m.gap_for_target(4.5e9);
  EXPECT_GT(g, 1.5);
  EXPECT_LT(g, 3.0);
  EXPECT_THROW(m.gap_for_target(m.f_t_hz), lnf::DomainError);
  EXPECT_THROW(m.gap_for_target(3e9), lnf::DomainError);
}

TEST(GapForTarget, RoundTripOverCalibratedRange) {
  const auto m = lnf::calibrate(kNarrow, kWide);
  for (double f = 4.2e9; f <= 4.8e9; f += 7.3e6) {
    EXPECT_LE(rel_err(m.fs_from_gap(m.gap_for_target(f)), f), 1e-12);
  }
  for (double g = 1.0; g <= 4.0; g += 0.01) {
    EXPECT_LE(rel_err(m.gap_for_target(m.fs_from_gap(g)), g), 1e-12);
  }
}
