#pragma once

// Flat text reports shared by the metrics and fit commands.

#include <string>

#include "lnf/fitting.hpp"
#include "lnf/metrics.hpp"

namespace lnf {

// One "key=value" line per field, fixed order.
std::string metrics_report(const FilterMetrics& m);
std::string metrics_csv_header();
std::string metrics_csv_row(const FilterMetrics& m);

std::string fit_report(const FitResult& r);

}  // namespace lnf
