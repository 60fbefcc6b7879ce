#include "lnf/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "lnf/error.hpp"

namespace lnf {

double DispersionModel::fs_from_gap(double gap_um) const {
  if (!(gap_um > 0.0) || !std::isfinite(gap_um)) throw DomainError("electrode gap must be > 0");
  return std::hypot(f_t_hz, c_lat_hz_um / gap_um);
}

double DispersionModel::gap_for_target(double fs_hz) const {
  if (!(fs_hz > f_t_hz)) {
    std::ostringstream os;
    os << "target " << fs_hz << " Hz is not above the thickness-mode asymptote " << f_t_hz
       << " Hz";
    throw DomainError(os.str());
  }
  // (fs - f_t)(fs + f_t) keeps precision close to the asymptote.
  return c_lat_hz_um / std::sqrt((fs_hz - f_t_hz) * (fs_hz + f_t_hz));
}

DispersionModel calibrate(const GapAnchor& a, const GapAnchor& b) {
  GapAnchor narrow = a;
  GapAnchor wide = b;
  if (!(narrow.gap_um > 0.0) || !(wide.gap_um > 0.0) || !(narrow.fs_hz > 0.0) ||
      !(wide.fs_hz > 0.0)) {
    throw InputError("dispersion anchors need positive gaps and frequencies");
  }
  if (narrow.gap_um == wide.gap_um) throw InputError("dispersion anchors share the same gap");
  if (narrow.gap_um > wide.gap_um) std::swap(narrow, wide);
  if (!(narrow.fs_hz > wide.fs_hz)) {
    throw InputError("dispersion anchors must have fs decreasing as the gap widens");
  }

  const double g1 = narrow.gap_um * narrow.gap_um;
  const double g2 = wide.gap_um * wide.gap_um;
  const double f1 = narrow.fs_hz * narrow.fs_hz;
  const double f2 = wide.fs_hz * wide.fs_hz;
  const double ft2 = (f1 * g1 - f2 * g2) / (g1 - g2);
  if (!(ft2 > 0.0)) {
    throw InputError("dispersion anchors imply a non-positive thickness-mode frequency");
  }
  DispersionModel m;
  m.f_t_hz = std::sqrt(ft2);
  m.c_lat_hz_um = std::sqrt((f1 - ft2) * g1);
  return m;
}

}  // namespace lnf
