#pragma once

// Modified Butterworth-Van Dyke model of a laterally excited A1 resonator.

#include <span>
#include <vector>

#include "lnf/netcore.hpp"

namespace lnf {

// 8/pi^2: coupling is kt2 = (pi^2/8) (fp^2 - fs^2) / fp^2, so a valid
// kt2 stays below 1/kCouplingScale.
inline constexpr double kCouplingScale = 8.0 / (kPi * kPi);

// Minimum relative separation between two motional resonances.
inline constexpr double kMinBranchSeparation = 1e-3;

struct ResonatorSpec {
  double fs_hz = 0.0;
  double kt2 = 0.0;
  double q = 0.0;
  double c0_f = 0.0;

  // Throws DomainError / InputError when outside the model's validity range.
  void validate() const;
};

struct MotionalBranch {
  double r = 0.0;  // ohm
  double l = 0.0;  // H
  double c = 0.0;  // F

  double resonance_hz() const;
  cplx impedance(double f_hz) const;
};

struct MbvdModel {
  double c0 = 0.0;
  MotionalBranch main;
  std::vector<MotionalBranch> spurs;
  // Electrode and lead parasitics in series with the whole resonator.
  double rs = 0.0;
  double ls = 0.0;

  // Element values must be positive (rm and all r >= 0; rs, ls >= 0) and
  // spur resonances must be at least kMinBranchSeparation away from the
  // main resonance and from each other.
  void validate() const;
};

struct SpurMode {
  double f_hz = 0.0;
  double kt2 = 0.0;
  double q = 0.0;
};

// Geometry record. C0 is carried as given; it is not derived from the
// electrode layout.
struct ResonatorLayout {
  double thickness_nm = 0.0;
  double electrode_width_um = 0.0;
  double gap_um = 0.0;
  double aperture_um = 0.0;
  double electrode_thickness_nm = 0.0;
  int electrodes = 0;
  double c0_f = 0.0;

  void validate() const;
};

// Anti-resonance implied by (fs, kt2) under the coupling convention above.
double antiresonance_hz(double fs_hz, double kt2);

// Motional capacitance that places the anti-resonance of (c0, c) at the
// coupling kt2: c = c0 * s*kt2 / (1 - s*kt2), s = 8/pi^2.
double motional_capacitance(double c0_f, double kt2);

// No spurs, rs = ls = 0.
MbvdModel derive_mbvd(const ResonatorSpec& spec);

// Each spur becomes a motional branch sharing the main c0.
MbvdModel with_spurious(MbvdModel model, std::span<const SpurMode> spurs);

cplx admittance_at(const MbvdModel& model, double f_hz);

// Evaluated in parallel over grid points.
std::vector<cplx> admittance(const MbvdModel& model, const FrequencyGrid& grid);

}  // namespace lnf
