#pragma once

// Touchstone v1 two-port (.s2p) files and CSV sweep export.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "lnf/netcore.hpp"

namespace lnf {

enum class FrequencyUnit { Hz, kHz, MHz, GHz };
enum class DataFormat { RI, MA, DB };

double unit_scale(FrequencyUnit unit);
std::string_view to_string(FrequencyUnit unit);
std::string_view to_string(DataFormat format);
// Case-insensitive; throws InputError on an unknown token.
FrequencyUnit parse_unit(std::string_view token);
DataFormat parse_format(std::string_view token);

struct TouchstoneDocument {
  // Defaults of a bare "#" option line.
  FrequencyUnit unit = FrequencyUnit::GHz;
  DataFormat format = DataFormat::MA;
  double reference_ohm = 50.0;
  // Text after each '!', in file order.
  std::vector<std::string> comments;
  // Frequency (in `unit`) then S11 S21 S12 S22 pairs, as written.
  std::vector<std::array<double, 9>> rows;
};

struct TouchstoneData {
  SMatrix matrix;
  TouchstoneDocument document;
};

// Throws ParseError carrying the 1-based line number for unknown option
// tokens, wrong column counts, non-numeric fields and non-increasing
// frequencies.
TouchstoneData parse_touchstone(std::string_view text);
TouchstoneData read_touchstone_file(const std::string& path);

// Option line "# <unit> S <format> R <z0>" followed by one row per point,
// 17 significant digits.
std::string write_touchstone(const SMatrix& s, DataFormat format,
                             FrequencyUnit unit = FrequencyUnit::GHz,
                             const std::vector<std::string>& comments = {});

inline constexpr std::string_view kCsvHeader =
    "freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im";
inline constexpr std::string_view kCsvMetricsColumns = ",s21_db,gd_ns";

// One row per point; with_metrics_columns appends |S21| in dB and the
// group delay in ns ("nan" where undefined).
std::string export_csv(const SMatrix& s, bool with_metrics_columns = true);

}  // namespace lnf
