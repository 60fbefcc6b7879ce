#include "lnf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include "json.hpp"
#include <set>
#include <sstream>

#include "lnf/error.hpp"

namespace lnf {

namespace {

using nlohmann::json;

class Checker {
 public:
  void fail(const std::string& path, const std::string& what) {
    problems_.push_back(path + ": " + what);
  }

  void keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
      fail(path, "expected an object");
      return;
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : obj.items()) {
      if (!ok.count(k)) fail(path + "." + k, "unknown key");
    }
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key,
                               bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + "." + key, "missing");
      return std::nullopt;
    }
    if (!it->is_number() || !std::isfinite(it->get<double>())) {
      fail(path + "." + key, "expected a finite number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<double> positive(const json& obj, const std::string& path, const char* key,
                                 bool required) {
    auto v = number(obj, path, key, required);
    if (v && !(*v > 0.0)) {
      fail(path + "." + key, "must be > 0");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> non_negative(const json& obj, const std::string& path, const char* key,
                                     bool required) {
    auto v = number(obj, path, key, required);
    if (v && !(*v >= 0.0)) {
      fail(path + "." + key, "must be >= 0");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& path, const char* key,
                                      std::int64_t min) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number_integer()) {
      fail(path + "." + key, "expected an integer");
      return std::nullopt;
    }
    const auto v = it->get<std::int64_t>();
    if (v < min) {
      fail(path + "." + key, "must be >= " + std::to_string(min));
      return std::nullopt;
    }
    return v;
  }

  void throw_if_any() const {
    if (problems_.empty()) return;
    std::string msg = "invalid configuration:";
    for (const std::string& p : problems_) msg += "\n  " + p;
    throw ConfigError(msg);
  }

 private:
  std::vector<std::string> problems_;
};

void read_resonator(Checker& c, const json& j, const std::string& path, ResonatorSpec* r,
                    bool required) {
  c.keys(j, path, {"fs_hz", "kt2", "q", "c0_f"});
  if (!j.is_object()) return;
  if (auto v = c.positive(j, path, "fs_hz", required)) r->fs_hz = *v;
  if (auto v = c.positive(j, path, "kt2", required)) {
    if (*v * kCouplingScale >= 1.0) {
      c.fail(path + ".kt2", "must be below pi^2/8");
    } else {
      r->kt2 = *v;
    }
  }
  if (auto v = c.positive(j, path, "q", required)) r->q = *v;
  if (auto v = c.positive(j, path, "c0_f", required)) r->c0_f = *v;
}

std::optional<StageKind> stage_kind(const std::string& s) {
  if (s == "series") return StageKind::Series;
  if (s == "shunt") return StageKind::Shunt;
  return std::nullopt;
}

void read_filter(Checker& c, const json& j, LadderDesign* d, bool required) {
  const std::string path = "filter";
  c.keys(j, path,
         {"series", "shunt", "rs_ohm", "ls_series_h", "ls_shunt_h", "cp_f", "z0_ohm", "topology",
          "spurs"});
  if (!j.is_object()) return;
  for (const char* key : {"series", "shunt"}) {
    const auto it = j.find(key);
    if (it == j.end()) {
      if (required) c.fail(path + "." + key, "missing");
      continue;
    }
    read_resonator(c, *it, path + "." + key,
                   std::string(key) == "series" ? &d->series : &d->shunt, required);
  }
  if (auto v = c.non_negative(j, path, "rs_ohm", required)) d->rs_ohm = *v;
  if (auto v = c.non_negative(j, path, "ls_series_h", required)) d->ls_series_h = *v;
  if (auto v = c.non_negative(j, path, "ls_shunt_h", required)) d->ls_shunt_h = *v;
  if (auto v = c.non_negative(j, path, "cp_f", required)) d->cp_f = *v;
  if (auto v = c.positive(j, path, "z0_ohm", false)) d->z0_ohm = *v;

  if (const auto it = j.find("topology"); it != j.end()) {
    if (!it->is_array() || it->empty()) {
      c.fail(path + ".topology", "expected a non-empty array");
    } else {
      d->topology.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& e = (*it)[i];
        const std::string ep = path + ".topology[" + std::to_string(i) + "]";
        StagePlan p;
        if (e.is_string()) {
          const auto k = stage_kind(e.get<std::string>());
          if (!k) {
            c.fail(ep, "expected \"series\" or \"shunt\"");
            continue;
          }
          p.kind = *k;
          p.multiplicity = *k == StageKind::Shunt ? 2 : 1;
        } else if (e.is_object()) {
          c.keys(e, ep, {"kind", "multiplicity"});
          const auto kit = e.find("kind");
          const auto k = kit != e.end() && kit->is_string() ? stage_kind(kit->get<std::string>())
                                                             : std::nullopt;
          if (!k) {
            c.fail(ep + ".kind", "expected \"series\" or \"shunt\"");
            continue;
          }
          p.kind = *k;
          p.multiplicity = *k == StageKind::Shunt ? 2 : 1;
          if (auto m = c.integer(e, ep, "multiplicity", 1)) p.multiplicity = static_cast<int>(*m);
        } else {
          c.fail(ep, "expected a stage name or object");
          continue;
        }
        d->topology.push_back(p);
      }
    }
  } else if (required) {
    c.fail(path + ".topology", "missing");
  }

  if (const auto it = j.find("spurs"); it != j.end()) {
    if (!it->is_array()) {
      c.fail(path + ".spurs", "expected an array");
    } else {
      d->spurs.clear();
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string sp = path + ".spurs[" + std::to_string(i) + "]";
        const json& e = (*it)[i];
        c.keys(e, sp, {"f_hz", "kt2", "q"});
        if (!e.is_object()) continue;
        const auto f = c.positive(e, sp, "f_hz", true);
        const auto k = c.positive(e, sp, "kt2", true);
        const auto q = c.positive(e, sp, "q", true);
        if (f && k && q) d->spurs.push_back({*f, *k, *q});
      }
    }
  }
}

void read_grid(Checker& c, const json& j, GridSpec* g) {
  c.keys(j, "grid", {"start_hz", "stop_hz", "points"});
  if (!j.is_object()) return;
  const auto start = c.positive(j, "grid", "start_hz", true);
  const auto stop = c.positive(j, "grid", "stop_hz", true);
  const auto points = c.integer(j, "grid", "points", 3);
  if (!j.contains("points")) c.fail("grid.points", "missing");
  if (start && stop && !(*stop > *start)) c.fail("grid", "stop_hz must be greater than start_hz");
  if (start) g->start_hz = *start;
  if (stop) g->stop_hz = *stop;
  if (points) g->points = static_cast<std::size_t>(*points);
}

void read_fit(Checker& c, const json& j, FitJob* f) {
  const std::string path = "fit";
  c.keys(j, path, {"free", "bounds", "seed", "max_iterations", "tolerance", "restarts",
                   "weighting"});
  if (!j.is_object()) return;
  const auto free = j.find("free");
  if (free == j.end() || !free->is_array() || free->empty()) {
    c.fail(path + ".free", "expected a non-empty array of parameter names");
  } else {
    for (const json& e : *free) {
      if (!e.is_string()) {
        c.fail(path + ".free", "parameter names must be strings");
        continue;
      }
      const std::string name = e.get<std::string>();
      try {
        design_parameter_unit(name);
        f->free.push_back(name);
      } catch (const Error&) {
        c.fail(path + ".free", "unknown parameter '" + name + "'");
      }
    }
  }
  if (const auto b = j.find("bounds"); b != j.end()) {
    if (!b->is_object()) {
      c.fail(path + ".bounds", "expected an object");
    } else {
      for (const auto& [name, v] : b->items()) {
        const std::string bp = path + ".bounds." + name;
        if (std::find(f->free.begin(), f->free.end(), name) == f->free.end()) {
          c.fail(bp, "parameter is not listed in fit.free");
          continue;
        }
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number() ||
            !(v[0].get<double>() < v[1].get<double>())) {
          c.fail(bp, "expected [lower, upper] with lower < upper");
          continue;
        }
        f->bounds[name] = {v[0].get<double>(), v[1].get<double>()};
      }
    }
  }
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned()) {
      c.fail(path + ".seed", "expected a non-negative integer");
    } else {
      f->options.seed = it->get<std::uint64_t>();
    }
  }
  if (auto v = c.integer(j, path, "max_iterations", 1)) f->options.max_iterations = static_cast<int>(*v);
  if (auto v = c.integer(j, path, "restarts", 0)) f->options.restarts = static_cast<int>(*v);
  if (auto v = c.positive(j, path, "tolerance", false)) f->options.tolerance = *v;
  if (const auto it = j.find("weighting"); it != j.end()) {
    if (*it == "uniform") {
      f->weighting = Weighting::Uniform;
    } else if (*it == "passband") {
      f->weighting = Weighting::Passband;
    } else {
      c.fail(path + ".weighting", "expected \"uniform\" or \"passband\"");
    }
  }
}

}  // namespace

GridSpec default_grid() { return {3.5e9, 5.5e9, 2001}; }

GridSpec parse_grid_arg(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, n;
  if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, n) ||
      n.find(',') != std::string::npos) {
    throw ConfigError("--grid expects start,stop,n");
  }
  GridSpec g;
  try {
    std::size_t used = 0;
    g.start_hz = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    g.stop_hz = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    const long long pts = std::stoll(n, &used);
    if (used != n.size() || pts < 3) throw std::invalid_argument(n);
    g.points = static_cast<std::size_t>(pts);
  } catch (const std::exception&) {
    throw ConfigError("--grid expects start,stop,n with numeric start/stop and n >= 3");
  }
  if (!(g.start_hz > 0.0)) throw ConfigError("--grid start must be > 0");
  if (!(g.stop_hz > g.start_hz)) {
    throw ConfigError("--grid frequencies must increase: stop " + b + " is not above start " + a);
  }
  return g;
}

LadderDesign design_by_name(const std::string& name) {
  if (name == "A" || name == "a") return design_a();
  if (name == "B" || name == "b") return design_b();
  throw ConfigError("unknown design '" + name + "'; expected A or B");
}

RunConfig parse_run_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Checker c;
  c.keys(doc, "$", {"design", "filter", "grid", "output", "fit"});
  c.throw_if_any();

  RunConfig cfg;
  std::optional<LadderDesign> base;
  if (const auto it = doc.find("design"); it != doc.end()) {
    if (!it->is_string() || (*it != "A" && *it != "B")) {
      c.fail("design", "expected \"A\" or \"B\"");
    } else {
      base = design_by_name(it->get<std::string>());
    }
  }
  if (const auto it = doc.find("filter"); it != doc.end()) {
    LadderDesign d = base ? *base : LadderDesign{};
    read_filter(c, *it, &d, !base.has_value());
    cfg.design = d;
  } else {
    cfg.design = base;
  }
  if (const auto it = doc.find("grid"); it != doc.end()) {
    GridSpec g;
    read_grid(c, *it, &g);
    cfg.grid = g;
  }
  if (const auto it = doc.find("output"); it != doc.end()) {
    c.keys(*it, "output", {"prefix"});
    if (it->is_object()) {
      const auto p = it->find("prefix");
      if (p == it->end() || !p->is_string() || p->get<std::string>().empty()) {
        c.fail("output.prefix", "expected a non-empty string");
      } else {
        cfg.output_prefix = p->get<std::string>();
      }
    }
  }
  if (const auto it = doc.find("fit"); it != doc.end()) {
    FitJob f;
    read_fit(c, *it, &f);
    cfg.fit = f;
  }
  c.throw_if_any();

  if (cfg.design) {
    try {
      cfg.design->to_spec();
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid configuration:\n  filter: ") + e.what());
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace lnf
