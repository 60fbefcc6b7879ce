#include "lnf/touchstone.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lnf/error.hpp"

namespace lnf {

namespace {

constexpr double kDeg = kPi / 180.0;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_double(std::string_view tok, double* out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, *out);
  return res.ec == std::errc() && res.ptr == last;
}

cplx decode(DataFormat format, double a, double b) {
  switch (format) {
    case DataFormat::RI:
      return {a, b};
    case DataFormat::MA:
      return std::polar(a, b * kDeg);
    case DataFormat::DB:
      return std::polar(std::pow(10.0, a / 20.0), b * kDeg);
  }
  return {};
}

std::pair<double, double> encode(DataFormat format, cplx v) {
  switch (format) {
    case DataFormat::RI:
      return {v.real(), v.imag()};
    case DataFormat::MA:
      return {std::abs(v), std::arg(v) / kDeg};
    case DataFormat::DB:
      return {20.0 * std::log10(std::abs(v)), std::arg(v) / kDeg};
  }
  return {};
}

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void parse_option_line(std::string_view body, std::size_t line_no, TouchstoneDocument* doc) {
  const std::vector<std::string_view> tokens = split_ws(body);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string t = upper(tokens[i]);
    if (t == "HZ" || t == "KHZ" || t == "MHZ" || t == "GHZ") {
      doc->unit = parse_unit(t);
    } else if (t == "RI" || t == "MA" || t == "DB") {
      doc->format = parse_format(t);
    } else if (t == "S") {
      // only S-parameters are supported
    } else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
      throw ParseError("parameter type '" + std::string(tokens[i]) +
                           "' is not supported; only S", line_no);
    } else if (t == "R") {
      double r = 0.0;
      if (i + 1 >= tokens.size() || !to_double(tokens[i + 1], &r)) {
        throw ParseError("option 'R' must be followed by a reference resistance", line_no);
      }
      if (!(r > 0.0) || !std::isfinite(r)) {
        throw ParseError("reference resistance must be > 0", line_no);
      }
      doc->reference_ohm = r;
      ++i;
    } else {
      throw ParseError("unknown option token '" + std::string(tokens[i]) + "'", line_no);
    }
  }
}

}  // namespace

double unit_scale(FrequencyUnit unit) {
  switch (unit) {
    case FrequencyUnit::Hz:
      return 1.0;
    case FrequencyUnit::kHz:
      return 1e3;
    case FrequencyUnit::MHz:
      return 1e6;
    case FrequencyUnit::GHz:
      return 1e9;
  }
  return 1.0;
}

std::string_view to_string(FrequencyUnit unit) {
  switch (unit) {
    case FrequencyUnit::Hz:
      return "Hz";
    case FrequencyUnit::kHz:
      return "kHz";
    case FrequencyUnit::MHz:
      return "MHz";
    case FrequencyUnit::GHz:
      return "GHz";
  }
  return "GHz";
}

std::string_view to_string(DataFormat format) {
  switch (format) {
    case DataFormat::RI:
      return "RI";
    case DataFormat::MA:
      return "MA";
    case DataFormat::DB:
      return "DB";
  }
  return "MA";
}

FrequencyUnit parse_unit(std::string_view token) {
  const std::string t = upper(token);
  if (t == "HZ") return FrequencyUnit::Hz;
  if (t == "KHZ") return FrequencyUnit::kHz;
  if (t == "MHZ") return FrequencyUnit::MHz;
  if (t == "GHZ") return FrequencyUnit::GHz;
  throw InputError("unknown frequency unit '" + std::string(token) + "'");
}

DataFormat parse_format(std::string_view token) {
  const std::string t = upper(token);
  if (t == "RI") return DataFormat::RI;
  if (t == "MA") return DataFormat::MA;
  if (t == "DB") return DataFormat::DB;
  throw InputError("unknown data format '" + std::string(token) + "'");
}

TouchstoneData parse_touchstone(std::string_view text) {
  TouchstoneDocument doc;
  bool have_options = false;
  std::vector<std::size_t> row_lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::size_t bang = line.find('!');
    if (bang != std::string_view::npos) {
      doc.comments.emplace_back(line.substr(bang + 1));
      line = line.substr(0, bang);
    }
    const std::vector<std::string_view> tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (tokens[0].front() == '#') {
      // Later option lines are ignored, as in Touchstone v1.
      if (!have_options) {
        const std::size_t hash = line.find('#');
        parse_option_line(line.substr(hash + 1), line_no, &doc);
        have_options = true;
      }
      continue;
    }
    if (tokens[0].front() == '[') {
      throw ParseError("Touchstone v2 keyword '" + std::string(tokens[0]) +
                           "' is not supported", line_no);
    }
    if (tokens.size() != 9) {
      throw ParseError("expected 9 numeric columns for a two-port row, found " +
                           std::to_string(tokens.size()), line_no);
    }
    std::array<double, 9> row{};
    for (std::size_t k = 0; k < 9; ++k) {
      if (!to_double(tokens[k], &row[k])) {
        throw ParseError("non-numeric field '" + std::string(tokens[k]) + "'", line_no);
      }
    }
    if (!doc.rows.empty() && !(row[0] > doc.rows.back()[0])) {
      throw ParseError("frequency is not strictly increasing", line_no);
    }
    if (!(row[0] > 0.0)) throw ParseError("frequency must be > 0", line_no);
    doc.rows.push_back(row);
    row_lines.push_back(line_no);
  }
  if (doc.rows.size() < 2) {
    throw ParseError("a sweep needs at least 2 data rows, found " +
                         std::to_string(doc.rows.size()), 0);
  }

  const double scale = unit_scale(doc.unit);
  std::vector<double> freqs(doc.rows.size());
  std::vector<SParams> pts(doc.rows.size());
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    const auto& r = doc.rows[i];
    freqs[i] = r[0] * scale;
    // v1 two-port column order: S11 S21 S12 S22.
    pts[i].s11 = decode(doc.format, r[1], r[2]);
    pts[i].s21 = decode(doc.format, r[3], r[4]);
    pts[i].s12 = decode(doc.format, r[5], r[6]);
    pts[i].s22 = decode(doc.format, r[7], r[8]);
  }
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    if (!(freqs[i] > freqs[i - 1])) {
      throw ParseError("frequency is not strictly increasing after unit scaling", row_lines[i]);
    }
  }
  return {SMatrix(FrequencyGrid(std::move(freqs)), doc.reference_ohm, std::move(pts)),
          std::move(doc)};
}

TouchstoneData read_touchstone_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_touchstone(ss.str());
}

std::string write_touchstone(const SMatrix& s, DataFormat format, FrequencyUnit unit,
                             const std::vector<std::string>& comments) {
  std::string out;
  for (const std::string& c : comments) {
    out += '!';
    out += c;
    out += '\n';
  }
  out += "# ";
  out += to_string(unit);
  out += " S ";
  out += to_string(format);
  out += " R ";
  append_number(out, s.z0());
  out += '\n';

  const double scale = unit_scale(unit);
  for (std::size_t i = 0; i < s.size(); ++i) {
    append_number(out, s.grid()[i] / scale);
    for (cplx v : {s[i].s11, s[i].s21, s[i].s12, s[i].s22}) {
      const auto [a, b] = encode(format, v);
      out += ' ';
      append_number(out, a);
      out += ' ';
      append_number(out, b);
    }
    out += '\n';
  }
  return out;
}

std::string export_csv(const SMatrix& s, bool with_metrics_columns) {
  std::string out(kCsvHeader);
  if (with_metrics_columns) out += kCsvMetricsColumns;
  out += '\n';

  std::vector<double> gd(s.size(), std::nan(""));
  if (with_metrics_columns && s.size() >= 3) gd = group_delay(s).seconds;

  for (std::size_t i = 0; i < s.size(); ++i) {
    append_number(out, s.grid()[i]);
    for (cplx v : {s[i].s11, s[i].s21, s[i].s12, s[i].s22}) {
      out += ',';
      append_number(out, v.real());
      out += ',';
      append_number(out, v.imag());
    }
    if (with_metrics_columns) {
      out += ',';
      append_number(out, to_db(s[i].s21));
      out += ',';
      append_number(out, gd[i] * 1e9);
    }
    out += '\n';
  }
  return out;
}

}  // namespace lnf
