#pragma once

// Two-parameter A1 dispersion: fs(G) = sqrt(f_t^2 + (c_lat / G)^2).
// Gaps are in micrometres, frequencies in Hz.

namespace lnf {

struct GapAnchor {
  double gap_um = 0.0;
  double fs_hz = 0.0;
};

struct DispersionModel {
  double f_t_hz = 0.0;        // thickness-mode asymptote
  double c_lat_hz_um = 0.0;   // lateral stiffening

  double fs_from_gap(double gap_um) const;
  double gap_for_target(double fs_hz) const;
};

// Exact two-point fit. Throws InputError unless the anchors have distinct
// gaps and frequency falls strictly as the gap widens.
DispersionModel calibrate(const GapAnchor& a, const GapAnchor& b);

}  // namespace lnf
