// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lnf/error.hpp"
#include "lnf/fitting.hpp"
#include "lnf/ladder.hpp"
#include "lnf/metrics.hpp"
#include "lnf/touchstone.hpp"
#include "support/compare.hpp"
#include "support/mna_oracle.hpp"
#include "support/noise.hpp"
#include "support/random_ladder.hpp"
#include "support/random_touchstone.hpp"

using testing_support::rel_err;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

const lnf::FrequencyGrid& filter_grid() {
  static const auto g = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, 2001);
  return g;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict design_a() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = lnf::analyze(lnf::build_network(lnf::preset_design_a(), filter_grid()));
  const double in_process = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto dir = std::filesystem::temp_directory_path() / "lnf_acceptance";
  std::filesystem::create_directories(dir);
  const std::string cmd = std::string(LNFILTER_PATH) + " simulate --design A --out " +
                          (dir / "a").string() + " > /dev/null";
  const auto t1 = std::chrono::steady_clock::now();
  const int rc = std::system(cmd.c_str());
  const double cli = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  std::filesystem::remove_all(dir);

  const bool pass = within(m.il_db, 1.7, 0.4) && within(m.fbw_3db, 0.10, 0.015) &&
                    m.oob_rejection_db <= -11.0 && m.ripple_db <= 1.0 && rc == 0 && cli < 1.0;
  return {pass, fmt("IL %.3f dB, FBW %.2f%%, OoB %.2f dB, ripple %.3f dB, core %.3f s, cli %.3f s "
                    "(exit %d)",
                    m.il_db, 100 * m.fbw_3db, m.oob_rejection_db, m.ripple_db, in_process, cli, rc)};
}

Verdict design_b() {
  const auto a = lnf::analyze(lnf::build_network(lnf::preset_design_a(), filter_grid()));
  const auto b = lnf::analyze(lnf::build_network(lnf::preset_design_b(), filter_grid()));
  const bool pass = within(b.il_db, 2.7, 0.6) && within(b.fbw_3db, 0.085, 0.015) &&
                    b.oob_rejection_db <= -20.0 && b.il_db > a.il_db;
  return {pass, fmt("IL %.3f dB (A %.3f), FBW %.2f%%, OoB %.2f dB", b.il_db, a.il_db,
                    100 * b.fbw_3db, b.oob_rejection_db)};
}

Verdict fbw4() {
  const auto a = lnf::analyze(lnf::build_network(lnf::preset_design_a(), filter_grid()));
  const auto b = lnf::analyze(lnf::build_network(lnf::preset_design_b(), filter_grid()));
  const bool pass = within(a.fbw_4db, 0.087, 0.015) && within(b.fbw_4db, 0.06, 0.015);
  return {pass, fmt("A %.2f%%, B %.2f%%", 100 * a.fbw_4db, 100 * b.fbw_4db)};
}

Verdict group_delay() {
  bool pass = true;
  std::string detail;
  for (const auto& [name, spec] : {std::pair{"A", lnf::preset_design_a()},
                                   std::pair{"B", lnf::preset_design_b()}}) {
    const auto s = lnf::build_network(spec, filter_grid());
    const auto m = lnf::analyze(s);
    const auto gd = lnf::group_delay(s);
    bool finite = true;
    double max_step = 0.0;
    double prev = NAN;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double f = filter_grid()[i];
      if (f < m.passband.lo_hz || f > m.passband.hi_hz) continue;
      finite &= std::isfinite(gd.seconds[i]);
      if (std::isfinite(prev)) max_step = std::max(max_step, std::abs(gd.seconds[i] - prev));
      prev = gd.seconds[i];
    }
    // Smooth: no adjacent-point jump above 10% of the in-band variation budget.
    pass &= finite && m.gd_variation_s <= 5e-9 && max_step <= 0.5e-9;
    detail += fmt("%s variation %.3f ns, max step %.4f ns%s; ", name, m.gd_variation_s * 1e9,
                  max_step * 1e9, finite ? "" : ", non-finite");
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Verdict resonator_round_trip() {
  const lnf::ResonatorSpec s{4.725e9, 0.28, 430.0, 380e-15};
  const double fp = lnf::antiresonance_hz(s.fs_hz, s.kt2);
  const double lo = 0.95 * s.fs_hz, hi = 1.05 * fp;
  const auto g = lnf::FrequencyGrid::linspace(lo, hi, static_cast<std::size_t>((hi - lo) / 0.1e6) + 1);
  const auto r = lnf::extract_resonator(lnf::admittance(lnf::derive_mbvd(s), g), g);
  const double ek = rel_err(r.kt2, s.kt2), eq = rel_err(r.q, s.q);
  return {ek <= 0.01 && eq <= 0.05,
          fmt("kt2 %.5f (err %.2e), Q %.2f (err %.2e), %zu points", r.kt2, ek, r.q, eq, g.size())};
}

Verdict spurs() {
  const auto clean = lnf::design_a();
  const auto m0 = lnf::analyze(lnf::build_network(clean.to_spec(), filter_grid()));
  auto spurred = clean;
  // Three modes inside the passband, each kt2 = 0.01, on every resonator.
  const double lo = m0.passband.lo_hz, w = m0.passband.width();
  spurred.spurs = {{lo + 0.25 * w, 0.01, 500.0}, {lo + 0.45 * w, 0.01, 500.0},
                   {lo + 0.8 * w, 0.01, 500.0}};
  const auto m1 = lnf::analyze(lnf::build_network(spurred.to_spec(), filter_grid()));
  const double inc = m1.ripple_db - m0.ripple_db;
  return {inc >= 2.0, fmt("ripple %.3f -> %.3f dB (+%.3f dB) with 3 spurs of kt2 0.01", m0.ripple_db,
                          m1.ripple_db, inc)};
}

Verdict mna_oracle() {
  std::mt19937_64 rng(7);
  const auto g = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, 201);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto spec = testing_support::random_ladder(rng);
    const auto s = lnf::build_network(spec, g);
    const auto net = oracle::ladder_netlist(spec);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto o = oracle::solve(net, g[i], spec.z0);
      worst = std::max({worst, rel_err(s[i].s11, o.s11), rel_err(s[i].s21, o.s21)});
    }
  }
  return {worst <= 1e-9, fmt("50 ladders x 201 points, worst relative error %.2e", worst)};
}

Verdict conservation() {
  std::mt19937_64 rng(11);
  const auto& g = filter_grid();
  double unitarity = 0.0, reciprocity = 0.0;
  auto lossless = [](lnf::LadderSpec spec) {
    for (auto& st : spec.stages) {
      st.resonator.rs = 0.0;
      st.resonator.main.r = 0.0;
      for (auto& b : st.resonator.spurs) b.r = 0.0;
    }
    return spec;
  };
  std::vector<lnf::LadderSpec> lossy{lnf::preset_design_a(), lnf::preset_design_b()};
  std::vector<lnf::LadderSpec> ideal{lossless(lnf::preset_design_a()), lossless(lnf::preset_design_b())};
  for (int k = 0; k < 20; ++k) {
    lossy.push_back(testing_support::random_ladder(rng));
    ideal.push_back(testing_support::random_ladder(rng, {6, true, true}));
  }
  for (const auto& spec : ideal) {
    const auto s = lnf::build_network(spec, g);
    for (std::size_t i = 0; i < s.size(); ++i) {
      unitarity = std::max(unitarity, std::abs(std::norm(s[i].s11) + std::norm(s[i].s21) - 1.0));
      reciprocity = std::max(reciprocity, rel_err(s[i].s12, s[i].s21));
    }
  }
  for (const auto& spec : lossy) {
    const auto s = lnf::build_network(spec, g);
    for (std::size_t i = 0; i < s.size(); ++i) {
      reciprocity = std::max(reciprocity, rel_err(s[i].s12, s[i].s21));
    }
  }
  return {unitarity <= 1e-10 && reciprocity <= 1e-9,
          fmt("lossless | |S11|^2+|S21|^2-1 | max %.2e over %zu builds, S12/S21 max %.2e over %zu",
              unitarity, ideal.size(), reciprocity, ideal.size() + lossy.size())};
}

Verdict fit_recovery() {
  const auto truth = lnf::design_a();
  const auto clean = lnf::build_network(truth.to_spec(), filter_grid());
  auto start = truth;
  for (const char* p : {"q", "rs", "cp"}) {
    lnf::set_design_parameter(start, p, 1.3 * lnf::get_design_parameter(truth, p));
  }
  int ok = 0;
  double wq = 0, wr = 0, wc = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto obs = testing_support::with_noise(clean, 0.01, seed);
    const auto r = lnf::fit_model(lnf::ladder_fit_problem(obs, start, {"q", "rs", "cp"}));
    const double eq = rel_err(r.value("q"), 200.0);
    const double er = rel_err(r.value("rs"), 4.0);
    const double ec = rel_err(r.value("cp"), 15e-15);
    wq = std::max(wq, eq);
    wr = std::max(wr, er);
    wc = std::max(wc, ec);
    ok += r.converged && eq <= 0.02 && er <= 0.05 && ec <= 0.05;
  }
  return {ok == 20, fmt("%d/20 trials within tolerance; worst errors Q %.2e, Rs %.2e, Cp %.2e "
                        "(start 1.3x truth)", ok, wq, wr, wc)};
}

std::size_t error_line(const std::string& text, std::string* what = nullptr) {
  try {
    lnf::parse_touchstone(text);
  } catch (const lnf::ParseError& e) {
    if (what) *what = e.what();
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

Verdict touchstone() {
  std::mt19937_64 rng(2024);
  const lnf::DataFormat formats[] = {lnf::DataFormat::RI, lnf::DataFormat::MA, lnf::DataFormat::DB};
  const lnf::FrequencyUnit units[] = {lnf::FrequencyUnit::Hz, lnf::FrequencyUnit::kHz,
                                      lnf::FrequencyUnit::MHz, lnf::FrequencyUnit::GHz};
  double worst = 0.0;
  for (int doc = 0; doc < 100; ++doc) {
    const auto unit = units[(doc / 3) % 4];
    const auto s = testing_support::random_matrix(rng, lnf::unit_scale(unit));
    const auto back = lnf::parse_touchstone(lnf::write_touchstone(s, formats[doc % 3], unit)).matrix;
    if (back.size() != s.size()) return {false, fmt("document %d lost points", doc)};
    for (std::size_t i = 0; i < s.size(); ++i) {
      worst = std::max({worst, rel_err(back.grid()[i], s.grid()[i]), rel_err(back[i].s11, s[i].s11),
                        rel_err(back[i].s21, s[i].s21), rel_err(back[i].s12, s[i].s12),
                        rel_err(back[i].s22, s[i].s22)});
    }
  }
  const std::string head = "! c\n# GHz S RI R 50\n";
  const std::string row = "1 0 0 1 0 1 0 0 0\n";
  struct Case {
    std::string text;
    std::size_t line;
  };
  const Case cases[] = {
      {head + row + "0.5 0 0 1 0 1 0 0 0\n", 4},  // decreasing frequency
      {head + row + "1 0 0 1 0 1 0 0 0\n", 4},    // repeated frequency
      {head + row + "2 0 0 1 0 1 0 0\n", 4},      // too few columns
      {head + row + "2 0 0 1 0 1 0 0 0 0\n", 4},  // too many columns
      {head + "1 0 0 x 0 1 0 0 0\n" + row, 3},    // non-numeric field
  };
  int rejected = 0;
  for (const auto& c : cases) rejected += error_line(c.text) == c.line;
  std::string what;
  const bool token = error_line("# GHz S XY R 50\n" + row, &what) == 1 &&
                     what.find("'XY'") != std::string::npos;
  const bool pass = worst <= 1e-9 && rejected == 5 && token;
  return {pass, fmt("100 documents, worst relative error %.2e; %d/5 malformed rows at the right "
                    "line; unknown token %s",
                    worst, rejected, token ? "quoted at line 1" : "NOT reported")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"Design A reproduction", design_a},
      {"Design B reproduction", design_b},
      {"4 dB fractional bandwidth", fbw4},
      {"Group delay", group_delay},
      {"Resonator round trip", resonator_round_trip},
      {"Spurious emulation", spurs},
      {"Network-analysis oracle", mna_oracle},
      {"Conservation properties", conservation},
      {"Fit recovery", fit_recovery},
      {"Touchstone round trip", touchstone},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::printf("%-4s criterion %2d  %-26s %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
