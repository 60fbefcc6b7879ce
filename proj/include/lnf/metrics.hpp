#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "lnf/netcore.hpp"

namespace lnf {

// Passband = |S21| within this many dB of its peak (peak-relative).
inline constexpr double kPassbandDropDb = 3.0;
// Absolute insertion-loss threshold for the 4 dB fractional bandwidth.
inline constexpr double kAbsoluteBandDb = -4.0;
// Rejection windows start this many 3 dB bandwidths away from f0 ...
inline constexpr double kRejectionGuard = 1.5;
// ... and extend to f0 * (1 +- kRejectionSpan), clipped to the sweep.
inline constexpr double kRejectionSpan = 0.20;
// Sweep ends should sit at least this far below the peak.
inline constexpr double kEdgeMarginDb = 10.0;

struct Band {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  double width() const { return hi_hz - lo_hz; }
  double center() const { return 0.5 * (lo_hz + hi_hz); }
};

struct FilterMetrics {
  double f0_hz = 0.0;
  double il_db = 0.0;
  double fbw_3db = 0.0;
  double fbw_4db = 0.0;
  // NaN when both rejection windows fall outside the sweep.
  double oob_rejection_db = 0.0;
  double ripple_db = 0.0;
  double gd_variation_s = 0.0;
  Band passband;
  // More than one disjoint region above the passband threshold.
  bool multimodal = false;
  // A sweep end is less than kEdgeMarginDb below the peak.
  bool narrow_sweep = false;
};

// Widest contiguous run of samples at or above threshold_db, with edges
// linearly interpolated to the crossing. Edges at a grid end are not
// extrapolated. *runs receives the number of disjoint runs.
std::optional<Band> widest_band(const FrequencyGrid& grid, std::span<const double> db,
                                double threshold_db, std::size_t* runs = nullptr);

// Deepest valley of db between the first and last sample at or above
// threshold_db, measured against the lower of the highest samples on its
// left and right. Zero for a response without interior dips.
double deepest_valley_db(std::span<const double> db, double threshold_db);

// Throws AnalysisError when no passband is found or the passband touches
// either end of the sweep.
FilterMetrics analyze(const SMatrix& s);

}  // namespace lnf
