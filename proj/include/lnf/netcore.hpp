#pragma once

// Two-port network algebra over an explicit frequency grid.
//
// Per-point value types (Abcd, YParams, SParams) carry the algebra; the
// whole-grid types (TwoPort, SMatrix) are thin containers that pair a
// FrequencyGrid with one value per point. All functions are pure.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lnf {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Strictly increasing, positive frequencies in Hz, at least two points.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> points_hz);

  static FrequencyGrid linspace(double start_hz, double stop_hz, std::size_t n);

  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  std::span<const double> points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  std::vector<double> points_;
};

struct Abcd {
  cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

  cplx det() const { return a * d - b * c; }
};

inline Abcd operator*(const Abcd& l, const Abcd& r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
          l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

struct YParams {
  cplx y11, y12, y21, y22;
};

struct SParams {
  cplx s11, s12, s21, s22;
};

// [[1, z], [0, 1]]
inline Abcd series_abcd(cplx z) { return {1.0, z, 0.0, 1.0}; }
// [[1, 0], [y, 1]]
inline Abcd shunt_abcd(cplx y) { return {1.0, 0.0, y, 1.0}; }

// Smallest |B| for which the ABCD -> Y conversion is attempted directly.
inline constexpr double kSingularB = 1e-18;
// Series resistance inserted at points where |B| < kSingularB.
inline constexpr double kGuardResistance = 1e-12;

// ABCD -> Y. When |B| < kSingularB the network is perturbed by a
// kGuardResistance series resistor first and *perturbed is set.
YParams abcd_to_y(const Abcd& n, bool* perturbed = nullptr);
Abcd y_to_abcd(const YParams& y);

// Admittance-parallel connection of two two-ports at one point.
Abcd parallel_abcd(const Abcd& lhs, const Abcd& rhs, bool* perturbed = nullptr);

// Returns false (and leaves *out untouched) when the conversion
// denominator A + B/z0 + C z0 + D vanishes.
bool abcd_to_s_point(const Abcd& n, double z0, SParams* out);
bool y_to_s_point(const YParams& y, double z0, SParams* out);

// ABCD matrix whose determinant is carried as the product of its factors'
// determinants. Near a transmission zero A, C and D grow like 1/|S21| and
// AD - BC of the product loses the digits that set S12/S21.
struct TrackedAbcd {
  Abcd m;
  cplx det = 1.0;
};

inline TrackedAbcd track(const Abcd& m) { return {m, m.det()}; }
inline TrackedAbcd operator*(const TrackedAbcd& l, const TrackedAbcd& r) {
  return {l.m * r.m, l.det * r.det};
}

// Same guard and flag as the Abcd overload; det follows Y12/Y21 of the sum.
TrackedAbcd parallel_abcd(const TrackedAbcd& lhs, const TrackedAbcd& rhs,
                          bool* perturbed = nullptr);
bool abcd_to_s_point(const TrackedAbcd& n, double z0, SParams* out);

// One ABCD matrix per grid point, with its tracked determinant.
class TwoPort {
 public:
  TwoPort(FrequencyGrid grid, std::vector<Abcd> points,
          std::vector<std::size_t> perturbed = {});
  TwoPort(FrequencyGrid grid, std::vector<TrackedAbcd> points,
          std::vector<std::size_t> perturbed = {});

  const FrequencyGrid& grid() const { return grid_; }
  std::span<const Abcd> points() const { return points_; }
  const Abcd& operator[](std::size_t i) const { return points_[i]; }
  TrackedAbcd tracked(std::size_t i) const { return {points_[i], dets_[i]}; }
  std::size_t size() const { return points_.size(); }

  // Indices where parallel_combine had to apply the guard resistance.
  std::span<const std::size_t> perturbed() const { return perturbed_; }

 private:
  FrequencyGrid grid_;
  std::vector<Abcd> points_;
  std::vector<cplx> dets_;
  std::vector<std::size_t> perturbed_;
};

class SMatrix {
 public:
  SMatrix(FrequencyGrid grid, double z0, std::vector<SParams> points);

  const FrequencyGrid& grid() const { return grid_; }
  double z0() const { return z0_; }
  std::span<const SParams> points() const { return points_; }
  const SParams& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }

  std::vector<cplx> s21() const;

 private:
  FrequencyGrid grid_;
  double z0_;
  std::vector<SParams> points_;
};

TwoPort identity(const FrequencyGrid& grid);

// Throws InputError when any z (resp. y) is non-finite.
TwoPort series_element(const FrequencyGrid& grid, std::span<const cplx> z);
TwoPort shunt_element(const FrequencyGrid& grid, std::span<const cplx> y);

// Ordered product; an empty list yields identity(grid).
// Throws DimensionError when any network is on a different grid.
TwoPort cascade(const FrequencyGrid& grid, std::span<const TwoPort> networks);
TwoPort operator*(const TwoPort& lhs, const TwoPort& rhs);

// Entrywise Y-parameter sum. Points needing the |B| guard on either
// operand are recorded in the result's perturbed() list.
TwoPort parallel_combine(const TwoPort& lhs, const TwoPort& rhs);

// Throws SingularPointError naming the first frequency with a vanishing
// conversion denominator; InputError for z0 <= 0.
SMatrix abcd_to_s(const TwoPort& n, double z0);

struct GroupDelay {
  // NaN where undefined.
  std::vector<double> seconds;
  // Points whose stencil touches |S21| == 0.
  std::vector<std::size_t> gaps;
};

// tau = -(1/2pi) dphi/df on the unwrapped S21 phase. Central differences
// inside, one-sided at the ends. Throws InputError for grids under 3 points.
GroupDelay group_delay(const SMatrix& s);

// Removes jumps larger than pi between neighbours.
std::vector<double> unwrap_phase(std::span<const double> wrapped);

inline double to_db(cplx v) { return 20.0 * std::log10(std::abs(v)); }

}  // namespace lnf
