#include "lnf/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lnf/error.hpp"

namespace lnf {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

void check_coupling(double kt2, const char* what, bool allow_zero = false) {
  if (!std::isfinite(kt2) || kt2 < 0.0 || (kt2 == 0.0 && !allow_zero)) {
    throw DomainError(std::string(what) + (allow_zero ? " kt2 must be >= 0" : " kt2 must be > 0"));
  }
  if (kt2 * kCouplingScale >= 1.0) {
    std::ostringstream os;
    os << what << " kt2 = " << kt2 << " is at or above the model limit pi^2/8";
    throw DomainError(os.str());
  }
}

bool too_close(double a, double b) {
  return std::abs(a - b) < kMinBranchSeparation * std::min(a, b);
}

}  // namespace

void ResonatorSpec::validate() const {
  if (!positive(fs_hz)) throw InputError("resonator fs must be > 0");
  check_coupling(kt2, "resonator");
  if (!positive(q)) throw InputError("resonator q must be > 0");
  if (!positive(c0_f)) throw InputError("resonator c0 must be > 0");
}

double MotionalBranch::resonance_hz() const { return 1.0 / (kTwoPi * std::sqrt(l * c)); }

cplx MotionalBranch::impedance(double f_hz) const {
  const double w = kTwoPi * f_hz;
  return {r, w * l - 1.0 / (w * c)};
}

void MbvdModel::validate() const {
  if (!positive(c0)) throw InputError("MBVD c0 must be > 0");
  auto check_branch = [](const MotionalBranch& b, const char* what) {
    if (!non_negative(b.r) || !positive(b.l) || !positive(b.c)) {
      throw InputError(std::string(what) + " needs r >= 0, l > 0, c > 0");
    }
  };
  check_branch(main, "MBVD main branch");
  for (const MotionalBranch& s : spurs) check_branch(s, "MBVD spurious branch");
  if (!non_negative(rs) || !non_negative(ls)) throw InputError("MBVD rs and ls must be >= 0");

  const double fs = main.resonance_hz();
  for (std::size_t i = 0; i < spurs.size(); ++i) {
    const double fi = spurs[i].resonance_hz();
    if (too_close(fi, fs)) throw InputError("spurious branch coincides with the main resonance");
    for (std::size_t j = 0; j < i; ++j) {
      if (too_close(fi, spurs[j].resonance_hz())) {
        throw InputError("two spurious branches coincide");
      }
    }
  }
}

void ResonatorLayout::validate() const {
  if (!positive(thickness_nm) || !positive(electrode_width_um) || !positive(gap_um) ||
      !positive(aperture_um) || !positive(electrode_thickness_nm) || electrodes <= 0 ||
      !positive(c0_f)) {
    throw InputError("resonator layout values must all be positive");
  }
}

double antiresonance_hz(double fs_hz, double kt2) {
  check_coupling(kt2, "resonator", true);
  return fs_hz / std::sqrt(1.0 - kCouplingScale * kt2);
}

double motional_capacitance(double c0_f, double kt2) {
  check_coupling(kt2, "resonator", true);
  const double s = kCouplingScale * kt2;
  return c0_f * s / (1.0 - s);
}

MbvdModel derive_mbvd(const ResonatorSpec& spec) {
  spec.validate();
  const double ws = kTwoPi * spec.fs_hz;
  MbvdModel m;
  m.c0 = spec.c0_f;
  // Equivalent to c0 (fp^2/fs^2 - 1).
  m.main.c = motional_capacitance(spec.c0_f, spec.kt2);
  m.main.l = 1.0 / (ws * ws * m.main.c);
  m.main.r = ws * m.main.l / spec.q;
  return m;
}

MbvdModel with_spurious(MbvdModel model, std::span<const SpurMode> spurs) {
  for (const SpurMode& s : spurs) {
    if (!positive(s.f_hz)) throw InputError("spur frequency must be > 0");
    if (!positive(s.q)) throw InputError("spur q must be > 0");
    check_coupling(s.kt2, "spur");
    const double wk = kTwoPi * s.f_hz;
    MotionalBranch b;
    b.c = motional_capacitance(model.c0, s.kt2);
    b.l = 1.0 / (wk * wk * b.c);
    b.r = wk * b.l / s.q;
    model.spurs.push_back(b);
  }
  model.validate();
  return model;
}

cplx admittance_at(const MbvdModel& model, double f_hz) {
  const double w = kTwoPi * f_hz;
  cplx y_inner{0.0, w * model.c0};
  y_inner += 1.0 / model.main.impedance(f_hz);
  for (const MotionalBranch& s : model.spurs) y_inner += 1.0 / s.impedance(f_hz);
  if (model.rs == 0.0 && model.ls == 0.0) return y_inner;
  return 1.0 / (cplx{model.rs, w * model.ls} + 1.0 / y_inner);
}

std::vector<cplx> admittance(const MbvdModel& model, const FrequencyGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<cplx> out(n);
  const double* f = grid.points().data();
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    out[i] = admittance_at(model, f[i]);
  }
  return out;
}

}  // namespace lnf
