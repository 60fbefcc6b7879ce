#include "lnf/netcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lnf/error.hpp"

namespace lnf {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
  if (!(a == b)) throw DimensionError("two-port networks are on different frequency grids");
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz) : points_(std::move(points_hz)) {
  if (points_.size() < 2) throw InputError("frequency grid needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || points_[i] <= 0.0) {
      std::ostringstream os;
      os << "frequency grid point " << i << " is not a positive finite value";
      throw InputError(os.str());
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      std::ostringstream os;
      os << "frequency grid is not strictly increasing at point " << i << " (" << points_[i - 1]
         << " Hz -> " << points_[i] << " Hz)";
      throw InputError(os.str());
    }
  }
}

FrequencyGrid FrequencyGrid::linspace(double start_hz, double stop_hz, std::size_t n) {
  if (n < 2) throw InputError("linspace needs at least 2 points");
  std::vector<double> pts(n);
  const double step = (stop_hz - start_hz) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) pts[i] = start_hz + step * static_cast<double>(i);
  pts.back() = stop_hz;
  return FrequencyGrid(std::move(pts));
}

YParams abcd_to_y(const Abcd& n, bool* perturbed) {
  Abcd m = n;
  if (std::abs(m.b) < kSingularB) {
    m = m * series_abcd(kGuardResistance);
    if (perturbed) *perturbed = true;
  }
  const cplx inv_b = 1.0 / m.b;
  return {m.d * inv_b, -m.det() * inv_b, -inv_b, m.a * inv_b};
}

Abcd y_to_abcd(const YParams& y) {
  const cplx inv = -1.0 / y.y21;
  const cplx dy = y.y11 * y.y22 - y.y12 * y.y21;
  return {y.y22 * inv, inv, dy * inv, y.y11 * inv};
}

TrackedAbcd parallel_abcd(const TrackedAbcd& lhs, const TrackedAbcd& rhs, bool* perturbed) {
  Abcd l = lhs.m;
  Abcd r = rhs.m;
  for (Abcd* n : {&l, &r}) {
    if (std::abs(n->b) < kSingularB) {
      *n = *n * series_abcd(kGuardResistance);
      if (perturbed) *perturbed = true;
    }
  }
  // Y-parameter sum written directly in ABCD form; det = Y12 / Y21.
  const cplx inv = 1.0 / (l.b + r.b);
  return {{(l.a * r.b + r.a * l.b) * inv, l.b * r.b * inv,
           l.c + r.c + (l.a - r.a) * (r.d - l.d) * inv, (l.d * r.b + r.d * l.b) * inv},
          (lhs.det * r.b + rhs.det * l.b) * inv};
}

Abcd parallel_abcd(const Abcd& lhs, const Abcd& rhs, bool* perturbed) {
  return parallel_abcd(track(lhs), track(rhs), perturbed).m;
}

bool abcd_to_s_point(const Abcd& n, double z0, SParams* out) {
  return abcd_to_s_point(track(n), z0, out);
}

bool abcd_to_s_point(const TrackedAbcd& t, double z0, SParams* out) {
  const Abcd& n = t.m;
  const cplx bz = n.b / z0;
  const cplx cz = n.c * z0;
  const cplx delta = n.a + bz + cz + n.d;
  if (delta == cplx{0.0} || !finite(1.0 / delta)) return false;
  out->s11 = (n.a + bz - cz - n.d) / delta;
  out->s12 = 2.0 * t.det / delta;
  out->s21 = 2.0 / delta;
  out->s22 = (-n.a + bz - cz + n.d) / delta;
  return true;
}

bool y_to_s_point(const YParams& y, double z0, SParams* out) {
  const cplx a11 = z0 * y.y11, a12 = z0 * y.y12, a21 = z0 * y.y21, a22 = z0 * y.y22;
  const cplx cross = a12 * a21;
  const cplx delta = (1.0 + a11) * (1.0 + a22) - cross;
  if (delta == cplx{0.0} || !finite(1.0 / delta)) return false;
  out->s11 = ((1.0 - a11) * (1.0 + a22) + cross) / delta;
  out->s12 = -2.0 * a12 / delta;
  out->s21 = -2.0 * a21 / delta;
  out->s22 = ((1.0 + a11) * (1.0 - a22) + cross) / delta;
  return true;
}

TwoPort::TwoPort(FrequencyGrid grid, std::vector<Abcd> points, std::vector<std::size_t> perturbed)
    : grid_(std::move(grid)), points_(std::move(points)), perturbed_(std::move(perturbed)) {
  if (points_.size() != grid_.size())
    throw DimensionError("two-port point count does not match its grid");
  dets_.reserve(points_.size());
  for (const Abcd& p : points_) dets_.push_back(p.det());
}

TwoPort::TwoPort(FrequencyGrid grid, std::vector<TrackedAbcd> points,
                 std::vector<std::size_t> perturbed)
    : grid_(std::move(grid)), perturbed_(std::move(perturbed)) {
  if (points.size() != grid_.size())
    throw DimensionError("two-port point count does not match its grid");
  points_.reserve(points.size());
  dets_.reserve(points.size());
  for (const TrackedAbcd& p : points) {
    points_.push_back(p.m);
    dets_.push_back(p.det);
  }
}

SMatrix::SMatrix(FrequencyGrid grid, double z0, std::vector<SParams> points)
    : grid_(std::move(grid)), z0_(z0), points_(std::move(points)) {
  if (!(z0_ > 0.0) || !std::isfinite(z0_)) throw InputError("reference impedance must be > 0");
  if (points_.size() != grid_.size())
    throw DimensionError("S-matrix point count does not match its grid");
}

std::vector<cplx> SMatrix::s21() const {
  std::vector<cplx> out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) out[i] = points_[i].s21;
  return out;
}

TwoPort identity(const FrequencyGrid& grid) {
  return TwoPort(grid, std::vector<Abcd>(grid.size()));
}

TwoPort series_element(const FrequencyGrid& grid, std::span<const cplx> z) {
  if (z.size() != grid.size()) throw DimensionError("impedance count does not match grid");
  std::vector<Abcd> pts(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!finite(z[i])) throw InputError("series impedance is not finite at " +
                                        std::to_string(grid[i]) + " Hz");
    pts[i] = series_abcd(z[i]);
  }
  return TwoPort(grid, std::move(pts));
}

TwoPort shunt_element(const FrequencyGrid& grid, std::span<const cplx> y) {
  if (y.size() != grid.size()) throw DimensionError("admittance count does not match grid");
  std::vector<Abcd> pts(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!finite(y[i])) throw InputError("shunt admittance is not finite at " +
                                        std::to_string(grid[i]) + " Hz");
    pts[i] = shunt_abcd(y[i]);
  }
  return TwoPort(grid, std::move(pts));
}

TwoPort cascade(const FrequencyGrid& grid, std::span<const TwoPort> networks) {
  std::vector<TrackedAbcd> acc(grid.size());
  std::vector<std::size_t> perturbed;
  for (const TwoPort& n : networks) {
    require_same_grid(grid, n.grid());
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = acc[i] * n.tracked(i);
    perturbed.insert(perturbed.end(), n.perturbed().begin(), n.perturbed().end());
  }
  return TwoPort(grid, std::move(acc), std::move(perturbed));
}

TwoPort operator*(const TwoPort& lhs, const TwoPort& rhs) {
  const TwoPort pair[] = {lhs, rhs};
  return cascade(lhs.grid(), pair);
}

TwoPort parallel_combine(const TwoPort& lhs, const TwoPort& rhs) {
  require_same_grid(lhs.grid(), rhs.grid());
  std::vector<TrackedAbcd> pts(lhs.size());
  std::vector<std::size_t> perturbed;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool flag = false;
    pts[i] = parallel_abcd(lhs.tracked(i), rhs.tracked(i), &flag);
    if (flag) perturbed.push_back(i);
  }
  return TwoPort(lhs.grid(), std::move(pts), std::move(perturbed));
}

SMatrix abcd_to_s(const TwoPort& n, double z0) {
  if (!(z0 > 0.0)) throw InputError("reference impedance must be > 0");
  std::vector<SParams> pts(n.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!abcd_to_s_point(n.tracked(i), z0, &pts[i])) {
      std::ostringstream os;
      os << "ABCD to S conversion is singular at " << n.grid()[i] << " Hz";
      throw SingularPointError(os.str(), n.grid()[i]);
    }
  }
  return SMatrix(n.grid(), z0, std::move(pts));
}

std::vector<double> unwrap_phase(std::span<const double> wrapped) {
  std::vector<double> out(wrapped.begin(), wrapped.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = wrapped[i] - wrapped[i - 1];
    if (std::abs(jump) > kPi) offset -= kTwoPi * std::round(jump / kTwoPi);
    out[i] = wrapped[i] + offset;
  }
  return out;
}

GroupDelay group_delay(const SMatrix& s) {
  const std::size_t n = s.size();
  if (n < 3) throw InputError("group delay needs at least 3 grid points");
  const FrequencyGrid& f = s.grid();

  std::vector<bool> zero(n);
  std::vector<double> wrapped(n);
  for (std::size_t i = 0; i < n; ++i) {
    zero[i] = std::abs(s[i].s21) == 0.0;
    wrapped[i] = std::arg(s[i].s21);
  }
  const std::vector<double> phase = unwrap_phase(wrapped);

  GroupDelay out;
  out.seconds.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    if (zero[lo] || zero[i] || zero[hi]) {
      out.gaps.push_back(i);
      continue;
    }
    const double dphi = phase[hi] - phase[lo];
    out.seconds[i] = -dphi / (kTwoPi * (f[hi] - f[lo]));
  }
  return out;
}

}  // namespace lnf
