#pragma once

// Seeded multiplicative complex Gaussian noise on every S-parameter entry.

#include <cmath>
#include <random>
#include <vector>

#include "lnf/netcore.hpp"

namespace testing_support {

// s * (1 + e), e complex Gaussian with rms magnitude `level`.
inline lnf::SMatrix with_noise(const lnf::SMatrix& s, double level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, level / std::sqrt(2.0));
  auto noisy = [&](lnf::cplx v) { return v * lnf::cplx(1.0 + n(rng), n(rng)); };
  std::vector<lnf::SParams> pts(s.points().begin(), s.points().end());
  for (auto& p : pts) p = {noisy(p.s11), noisy(p.s12), noisy(p.s21), noisy(p.s22)};
  return lnf::SMatrix(s.grid(), s.z0(), std::move(pts));
}

}  // namespace testing_support
