#include "lnf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lnf/error.hpp"

namespace lnf {

namespace {

double crossing(double f_a, double db_a, double f_b, double db_b, double threshold) {
  return f_a + (threshold - db_a) / (db_b - db_a) * (f_b - f_a);
}

}  // namespace

std::optional<Band> widest_band(const FrequencyGrid& grid, std::span<const double> db,
                                double threshold_db, std::size_t* runs) {
  const std::size_t n = db.size();
  std::optional<Band> best;
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!(db[i] >= threshold_db)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && db[j + 1] >= threshold_db) ++j;
    ++count;
    Band b;
    b.lo_hz = i == 0 ? grid[0] : crossing(grid[i - 1], db[i - 1], grid[i], db[i], threshold_db);
    b.hi_hz = j + 1 == n ? grid[n - 1]
                         : crossing(grid[j], db[j], grid[j + 1], db[j + 1], threshold_db);
    if (!best || b.width() > best->width()) best = b;
    i = j + 1;
  }
  if (runs) *runs = count;
  return best;
}

double deepest_valley_db(std::span<const double> db, double threshold_db) {
  std::size_t first = db.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (db[i] >= threshold_db) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first >= last) return 0.0;

  const std::size_t m = last - first + 1;
  std::vector<double> right_max(m);
  right_max[m - 1] = db[last];
  for (std::size_t k = m - 1; k-- > 0;) right_max[k] = std::max(right_max[k + 1], db[first + k]);

  double left_max = -std::numeric_limits<double>::infinity();
  double deepest = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double v = db[first + k];
    left_max = std::max(left_max, v);
    deepest = std::max(deepest, std::min(left_max, right_max[k]) - v);
  }
  return deepest;
}

FilterMetrics analyze(const SMatrix& s) {
  const FrequencyGrid& f = s.grid();
  const std::size_t n = s.size();
  std::vector<double> db(n);
  for (std::size_t i = 0; i < n; ++i) db[i] = to_db(s[i].s21);

  const double peak = *std::max_element(db.begin(), db.end());
  if (!std::isfinite(peak)) throw AnalysisError("|S21| has no finite peak");

  FilterMetrics m;
  m.il_db = -peak;

  const double threshold = peak - kPassbandDropDb;
  std::size_t runs = 0;
  const std::optional<Band> band = widest_band(f, db, threshold, &runs);
  if (!band) throw AnalysisError("no passband found");
  if (band->lo_hz <= f.front() || band->hi_hz >= f.back()) {
    throw AnalysisError("passband reaches the end of the sweep; widen the frequency grid");
  }
  m.passband = *band;
  m.multimodal = runs > 1;
  m.narrow_sweep = db.front() > peak - kEdgeMarginDb || db.back() > peak - kEdgeMarginDb;
  m.f0_hz = band->center();
  m.fbw_3db = band->width() / m.f0_hz;

  const std::optional<Band> band4 = widest_band(f, db, kAbsoluteBandDb);
  m.fbw_4db = band4 ? band4->width() / m.f0_hz : 0.0;

  const double lower_stop = m.f0_hz * (1.0 - kRejectionGuard * m.fbw_3db);
  const double upper_start = m.f0_hz * (1.0 + kRejectionGuard * m.fbw_3db);
  const double lower_start = std::max(f.front(), m.f0_hz * (1.0 - kRejectionSpan));
  const double upper_stop = std::min(f.back(), m.f0_hz * (1.0 + kRejectionSpan));
  double rejection = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool lower = f[i] >= lower_start && f[i] <= lower_stop;
    const bool upper = f[i] >= upper_start && f[i] <= upper_stop;
    if (lower || upper) {
      rejection = std::max(rejection, db[i]);
      any = true;
    }
  }
  m.oob_rejection_db = any ? rejection : std::numeric_limits<double>::quiet_NaN();

  m.ripple_db = deepest_valley_db(db, threshold);

  const GroupDelay gd = group_delay(s);
  double gd_min = std::numeric_limits<double>::infinity();
  double gd_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] < band->lo_hz || f[i] > band->hi_hz || std::isnan(gd.seconds[i])) continue;
    gd_min = std::min(gd_min, gd.seconds[i]);
    gd_max = std::max(gd_max, gd.seconds[i]);
  }
  m.gd_variation_s = gd_max >= gd_min ? gd_max - gd_min : 0.0;
  return m;
}

}  // namespace lnf
