#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "lnf/error.hpp"
#include "lnf/ladder.hpp"
#include "lnf/touchstone.hpp"
#include "support/compare.hpp"
#include "support/random_touchstone.hpp"

using lnf::cplx;
using testing_support::random_matrix;
using testing_support::rel_err;

namespace {

std::size_t parse_error_line(const std::string& text) {
  try {
    lnf::parse_touchstone(text);
  } catch (const lnf::ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return 0;
}

std::string parse_error_text(const std::string& text) {
  try {
    lnf::parse_touchstone(text);
  } catch (const lnf::ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseTouchstone, ThroughLineRow) {
  const auto d = lnf::parse_touchstone("# GHz S RI R 50\n4.5 0 0 1 0 0 1 0 0\n4.6 0 0 1 0 0 1 0 0\n");
  EXPECT_EQ(d.matrix.grid()[0], 4.5e9);
  EXPECT_EQ(d.matrix[0].s21, cplx(1.0, 0.0));
  EXPECT_EQ(d.matrix[0].s11, cplx(0.0, 0.0));
  EXPECT_EQ(d.matrix.z0(), 50.0);
}

TEST(ParseTouchstone, MagnitudeAngle) {
  const auto d = lnf::parse_touchstone("# MHz S MA R 50\n1 0 0 1 90 0 0 0 0\n2 0 0 1 90 0 0 0 0\n");
  EXPECT_NEAR(d.matrix[0].s21.real(), 0.0, 1e-16);
  EXPECT_NEAR(d.matrix[0].s21.imag(), 1.0, 1e-16);
  EXPECT_EQ(d.matrix.grid()[1], 2e6);
}

TEST(ParseTouchstone, DecibelAngle) {
  const auto d =
      lnf::parse_touchstone("# kHz S DB R 75\n1 -6.0205999132796242 180 0 0 0 0 0 0\n"
                            "2 0 0 0 0 0 0 0 0\n");
  EXPECT_LE(rel_err(d.matrix[0].s11, cplx(-0.5, 0.0)), 1e-15);
  EXPECT_EQ(d.matrix.z0(), 75.0);
  EXPECT_EQ(d.document.unit, lnf::FrequencyUnit::kHz);
  EXPECT_EQ(d.document.format, lnf::DataFormat::DB);
}

TEST(ParseTouchstone, BareOptionLineDefaults) {
  const auto d = lnf::parse_touchstone("#\n1 1 0 0 0 0 0 1 0\n2 1 0 0 0 0 0 1 0\n");
  EXPECT_EQ(d.document.unit, lnf::FrequencyUnit::GHz);
  EXPECT_EQ(d.document.format, lnf::DataFormat::MA);
  EXPECT_EQ(d.document.reference_ohm, 50.0);
  EXPECT_EQ(d.matrix.grid()[0], 1e9);
  EXPECT_EQ(d.matrix[0].s11, cplx(1.0));
}

TEST(ParseTouchstone, ColumnOrderAndComments) {
  const auto d = lnf::parse_touchstone(
      "! measured die 7\n# Hz S RI R 50 ! trailing\n"
      "1 11 0 21 0 12 0 22 0 ! row\n2 11 0 21 0 12 0 22 0\n# GHz S MA R 10\n");
  EXPECT_EQ(d.matrix[0].s11, cplx(11.0));
  EXPECT_EQ(d.matrix[0].s21, cplx(21.0));
  EXPECT_EQ(d.matrix[0].s12, cplx(12.0));
  EXPECT_EQ(d.matrix[0].s22, cplx(22.0));
  EXPECT_EQ(d.document.comments,
            (std::vector<std::string>{" measured die 7", " trailing", " row"}));
  // Later option lines are ignored.
  EXPECT_EQ(d.matrix.z0(), 50.0);
  EXPECT_EQ(d.matrix.grid()[1], 2.0);
}

TEST(ParseTouchstone, CaseInsensitiveAndCrlf) {
  const auto d = lnf::parse_touchstone("# ghz s ri r 50\r\n1 0 0 1 0 1 0 0 0\r\n2 0 0 1 0 1 0 0 0\r\n");
  EXPECT_EQ(d.matrix.grid()[1], 2e9);
}

TEST(ParseTouchstone, MalformedInputsReportLines) {
  const std::string head = "! c\n# GHz S RI R 50\n";
  const std::string row1 = "1 0 0 1 0 1 0 0 0\n";
  EXPECT_EQ(parse_error_line(head + row1 + "0.5 0 0 1 0 1 0 0 0\n"), 4u);
  EXPECT_EQ(parse_error_line(head + row1 + "1 0 0 1 0 1 0 0 0\n"), 4u);
  EXPECT_EQ(parse_error_line(head + row1 + "2 0 0 1 0 1 0 0\n"), 4u);
  EXPECT_EQ(parse_error_line(head + row1 + "2 0 0 1 0 1 0 0 0 0\n"), 4u);
  EXPECT_EQ(parse_error_line(head + "1 0 0 x 0 1 0 0 0\n" + row1), 3u);
  EXPECT_EQ(parse_error_line("# GHz S XY R 50\n" + row1), 1u);
  EXPECT_EQ(parse_error_line("\n# GHz Y RI R 50\n" + row1), 2u);
  EXPECT_EQ(parse_error_line("# GHz S RI R\n" + row1), 1u);
  EXPECT_EQ(parse_error_line("# GHz S RI R -5\n" + row1), 1u);
  EXPECT_EQ(parse_error_line("[Version] 2.0\n" + head + row1), 1u);
  EXPECT_EQ(parse_error_line(head + "0 0 0 1 0 1 0 0 0\n" + row1), 3u);
  EXPECT_EQ(parse_error_line(head + row1), 0u);
  EXPECT_EQ(parse_error_line(""), 0u);
}

TEST(ParseTouchstone, DiagnosticsQuoteOffendingTokens) {
  const std::string row = "1 0 0 1 0 1 0 0 0\n2 0 0 1 0 1 0 0 0\n";
  EXPECT_NE(parse_error_text("# GHz S XY R 50\n" + row).find("'XY'"), std::string::npos);
  EXPECT_NE(parse_error_text("# GHz S RI R 50\n1 0 0 1e 0 1 0 0 0\n").find("'1e'"),
            std::string::npos);
  EXPECT_EQ(parse_error_text("# GHz S RI R 50\n" + row + "1.5 0 0 1 0 1 0 0 0\n").rfind("line 4:", 0),
            0u);
}

TEST(WriteTouchstone, OptionLineAndPrecision) {
  const auto g = lnf::FrequencyGrid({4.5e9, 4.6e9});
  const lnf::SMatrix s(g, 50.0, {{0.1, 0.5, 0.5, 0.1}, {0.1, 0.5, 0.5, 0.1}});
  const std::string text = lnf::write_touchstone(s, lnf::DataFormat::DB, lnf::FrequencyUnit::GHz,
                                                 {" hello"});
  std::istringstream in(text);
  std::string c, opt, row;
  std::getline(in, c);
  std::getline(in, opt);
  std::getline(in, row);
  EXPECT_EQ(c, "! hello");
  EXPECT_EQ(opt, "# GHz S DB R 50");
  std::istringstream r(row);
  double f, s11db, s11a, s21db;
  r >> f >> s11db >> s11a >> s21db;
  EXPECT_EQ(f, 4.5);
  EXPECT_NEAR(s21db, -6.0206, 1e-4);
  EXPECT_EQ(s21db, 20.0 * std::log10(0.5));
}

TEST(WriteTouchstone, EmptyGridIsRejected) {
  EXPECT_THROW(lnf::SMatrix(lnf::FrequencyGrid({}), 50.0, {}), lnf::InputError);
}

TEST(TouchstoneRoundTrip, RandomDocumentsAllFormatsAndUnits) {
  std::mt19937_64 rng(2024);
  const lnf::DataFormat formats[] = {lnf::DataFormat::RI, lnf::DataFormat::MA, lnf::DataFormat::DB};
  const lnf::FrequencyUnit units[] = {lnf::FrequencyUnit::Hz, lnf::FrequencyUnit::kHz,
                                      lnf::FrequencyUnit::MHz, lnf::FrequencyUnit::GHz};
  for (int doc = 0; doc < 100; ++doc) {
    const auto fmt = formats[doc % 3];
    const auto unit = units[(doc / 3) % 4];
    const auto s = random_matrix(rng, lnf::unit_scale(unit));
    const auto back = lnf::parse_touchstone(lnf::write_touchstone(s, fmt, unit)).matrix;
    ASSERT_EQ(back.size(), s.size());
    EXPECT_EQ(back.z0(), s.z0());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_LE(rel_err(back.grid()[i], s.grid()[i]), 1e-15);
      EXPECT_LE(rel_err(back[i].s11, s[i].s11), 1e-9);
      EXPECT_LE(rel_err(back[i].s21, s[i].s21), 1e-9);
      EXPECT_LE(rel_err(back[i].s12, s[i].s12), 1e-9);
      EXPECT_LE(rel_err(back[i].s22, s[i].s22), 1e-9);
    }
  }
}

TEST(ExportCsv, HeaderAndRows) {
  const auto g = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, 201);
  const auto s = lnf::build_network(lnf::preset_design_a(), g);
  const std::string csv = lnf::export_csv(s, true);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "freq_hz,s11_re,s11_im,s21_re,s21_im,s12_re,s12_im,s22_re,s22_im,s21_db,gd_ns");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, g.size());
  std::istringstream plain(lnf::export_csv(s, false));
  std::getline(plain, line);
  EXPECT_EQ(line, std::string(lnf::kCsvHeader));
}
