// Stage-count calibration for the preset ladders.
//
// Sweeps every series/shunt ordering up to --max-stages with the shared
// resonator and parasitic values held fixed, and lists the orderings that
// fall inside the target windows of each design, ranked by stage count and
// then by margin.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lnf/error.hpp"
#include "lnf/ladder.hpp"
#include "lnf/metrics.hpp"

namespace {

struct Target {
  const char* name;
  double il, il_tol;
  double fbw, fbw_tol;
  double fbw4, fbw4_tol;
  double oob_max;
};

struct Candidate {
  std::string order;
  lnf::FilterMetrics m;
  double margin;
};

double margin(const Target& t, const lnf::FilterMetrics& m) {
  return std::min({1.0 - std::abs(m.il_db - t.il) / t.il_tol,
                   1.0 - std::abs(100.0 * m.fbw_3db - t.fbw) / t.fbw_tol,
                   1.0 - std::abs(100.0 * m.fbw_4db - t.fbw4) / t.fbw4_tol});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank ladder stage orderings against the design targets"};
  int max_stages = 8;
  int show = 10;
  app.add_option("--max-stages", max_stages, "Longest ordering to try")->check(CLI::Range(1, 12));
  app.add_option("--show", show, "Candidates listed per design");
  CLI11_PARSE(app, argc, argv);

  const Target targets[] = {{"A", 1.7, 0.4, 10.0, 1.5, 8.7, 1.5, -13.0},
                            {"B", 2.7, 0.6, 8.5, 1.5, 6.0, 1.5, -25.0}};
  const auto grid = lnf::FrequencyGrid::linspace(3.5e9, 5.5e9, 2001);

  std::vector<Candidate> all;
  for (int n = 1; n <= max_stages; ++n) {
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      lnf::LadderDesign d = lnf::reference_design();
      std::string order;
      for (int k = 0; k < n; ++k) {
        const bool shunt = (bits >> k) & 1u;
        d.topology.push_back({shunt ? lnf::StageKind::Shunt : lnf::StageKind::Series, shunt ? 2 : 1});
        order += shunt ? 'P' : 'S';
      }
      try {
        all.push_back({order, lnf::analyze(lnf::build_network(d.to_spec(), grid)), 0.0});
      } catch (const lnf::Error&) {
        // No usable passband for this ordering.
      }
    }
  }

  for (const Target& t : targets) {
    std::vector<Candidate> ok;
    for (Candidate c : all) {
      c.margin = margin(t, c.m);
      if (c.margin >= 0.0 && c.m.oob_rejection_db <= t.oob_max) ok.push_back(c);
    }
    std::sort(ok.begin(), ok.end(), [](const Candidate& a, const Candidate& b) {
      return a.order.size() != b.order.size() ? a.order.size() < b.order.size()
                                              : a.margin > b.margin;
    });
    std::printf("design %s: %zu orderings meet IL %.1f+-%.1f dB, FBW %.1f+-%.1f%%, "
                "FBW4 %.1f+-%.1f%%, OoB <= %.0f dB\n",
                t.name, ok.size(), t.il, t.il_tol, t.fbw, t.fbw_tol, t.fbw4, t.fbw4_tol, t.oob_max);
    for (int i = 0; i < std::min<int>(show, static_cast<int>(ok.size())); ++i) {
      const auto& c = ok[i];
      std::printf("  %-10s IL %.2f  FBW %.2f%%  FBW4 %.2f%%  OoB %.1f  gd %.2f ns  margin %.2f\n",
                  c.order.c_str(), c.m.il_db, 100.0 * c.m.fbw_3db, 100.0 * c.m.fbw_4db,
                  c.m.oob_rejection_db, c.m.gd_variation_s * 1e9, c.margin);
    }
  }
  return 0;
}
