#include "lnf/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <sstream>

#include "lnf/error.hpp"

namespace lnf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Vertex abscissa of the parabola through three points.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (curvature == 0.0 || !std::isfinite(curvature)) return x1;
  const double v = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
  return std::clamp(v, x0, x2);
}

double refine(const FrequencyGrid& grid, std::span<const double> v, std::size_t i) {
  return parabola_vertex(grid[i - 1], v[i - 1], grid[i], v[i], grid[i + 1], v[i + 1]);
}

std::size_t nearest_index(const FrequencyGrid& grid, double f_hz) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), f_hz);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (i == grid.size()) return i - 1;
  if (i > 0 && f_hz - grid[i - 1] < grid[i] - f_hz) --i;
  return i;
}

std::size_t points_within(const FrequencyGrid& grid, double lo, double hi) {
  const auto a = std::lower_bound(grid.begin(), grid.end(), lo);
  const auto b = std::upper_bound(grid.begin(), grid.end(), hi);
  return static_cast<std::size_t>(b - a);
}

bool precision_warning(const FrequencyGrid& grid, double fs_hz, double q) {
  if (!std::isfinite(q) || q <= 0.0) return true;
  const double half = 0.5 * fs_hz / q;
  return points_within(grid, fs_hz - half, fs_hz + half) <
         static_cast<std::size_t>(kMinPointsPerLinewidth);
}

// Levenberg-Marquardt on parameters normalised by their starting scale.
class Solver {
 public:
  Solver(const FitProblem& p, const FitOptions& o) : problem_(p), options_(o) {
    const std::size_t n = p.parameters.size();
    if (n == 0) throw FitError("fit has no free parameters");
    if (!p.model) throw FitError("fit has no response model");
    scale_.resize(n);
    lo_.resize(n);
    hi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Parameter& q = p.parameters[i];
      if (!(q.lower <= q.value && q.value <= q.upper) || !std::isfinite(q.lower) ||
          !std::isfinite(q.upper)) {
        throw FitError("parameter '" + q.name + "' starts outside its bounds");
      }
      double s = std::abs(q.value);
      if (s == 0.0) s = std::max(std::abs(q.lower), std::abs(q.upper));
      if (s == 0.0) s = 1.0;
      scale_[i] = s;
      lo_[i] = q.lower / s;
      hi_[i] = q.upper / s;
    }
    const std::size_t m = p.observed.size();
    sqrt_w_.assign(m, 1.0);
    if (!p.weights.empty()) {
      if (p.weights.size() != m) throw FitError("weight count does not match observations");
      for (std::size_t k = 0; k < m; ++k) {
        if (!(p.weights[k] >= 0.0)) throw FitError("weights must be >= 0");
        sqrt_w_[k] = std::sqrt(p.weights[k]);
      }
    }
    weight_sum_ = 0.0;
    double obs_power = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      weight_sum_ += sqrt_w_[k] * sqrt_w_[k];
      obs_power += sqrt_w_[k] * sqrt_w_[k] * std::norm(p.observed[k]);
    }
    if (!(weight_sum_ > 0.0)) throw FitError("all weights are zero");
    obs_rms_ = std::sqrt(obs_power / weight_sum_);
  }

  std::size_t size() const { return scale_.size(); }
  double lower(std::size_t i) const { return lo_[i]; }
  double upper(std::size_t i) const { return hi_[i]; }
  double scale(std::size_t i) const { return scale_[i]; }

  std::vector<double> normalised_start() const {
    std::vector<double> x(size());
    for (std::size_t i = 0; i < size(); ++i) x[i] = problem_.parameters[i].value / scale_[i];
    return x;
  }

  // Weighted residual vector (re, im interleaved); returns the cost or
  // +inf when the model fails or produces non-finite values.
  double evaluate(const std::vector<double>& x, Eigen::VectorXd* r) const {
    std::vector<double> params(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) params[i] = x[i] * scale_[i];
    std::vector<cplx> model;
    try {
      model = problem_.model(params);
    } catch (const Error&) {
      return kInf;
    }
    const std::size_t m = problem_.observed.size();
    if (model.size() != m) throw FitError("model response length does not match observations");
    r->resize(static_cast<Eigen::Index>(2 * m));
    double cost = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const cplx e = (model[k] - problem_.observed[k]) * sqrt_w_[k];
      (*r)[static_cast<Eigen::Index>(2 * k)] = e.real();
      (*r)[static_cast<Eigen::Index>(2 * k + 1)] = e.imag();
      cost += std::norm(e);
    }
    return std::isfinite(cost) ? cost : kInf;
  }

  double residual(double cost) const { return std::sqrt(cost / weight_sum_); }

  struct Outcome {
    std::vector<double> x;
    double cost = kInf;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
  };

  Outcome run(std::vector<double> x) const {
    const std::size_t n = size();
    Outcome out;
    Eigen::VectorXd r;
    double cost = evaluate(x, &r);
    if (!std::isfinite(cost)) throw FitError("fit cost is not finite at the starting point");
    out.history.push_back(cost);

    double lambda = 1e-3;
    int it = 0;
    bool converged = residual(cost) <= options_.tolerance * obs_rms_;
    Eigen::VectorXd rp, rm;
    while (!converged && it < options_.max_iterations) {
      ++it;
      Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const double h = 1e-7 * std::max(std::abs(x[i]), 1e-3);
        std::vector<double> xp = x, xm = x;
        xp[i] = std::min(x[i] + h, hi_[i]);
        xm[i] = std::max(x[i] - h, lo_[i]);
        if (!std::isfinite(evaluate(xp, &rp))) { xp[i] = x[i]; rp = r; }
        if (!std::isfinite(evaluate(xm, &rm))) { xm[i] = x[i]; rm = r; }
        const double dx = xp[i] - xm[i];
        jac.col(static_cast<Eigen::Index>(i)) =
            dx > 0.0 ? Eigen::VectorXd((rp - rm) / dx) : Eigen::VectorXd::Zero(r.size());
      }
      const Eigen::VectorXd grad = jac.transpose() * r;
      Eigen::MatrixXd normal = jac.transpose() * jac;

      // Parameters pinned on a bound with the gradient pushing outward
      // are held fixed for this iteration.
      std::vector<bool> active(n, true);
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if ((x[i] <= lo_[i] && grad[ii] > 0.0) || (x[i] >= hi_[i] && grad[ii] < 0.0)) {
          active[i] = false;
        }
      }
      const double diag_floor = 1e-12 * std::max(normal.diagonal().maxCoeff(), 1e-300);

      bool accepted = false;
      while (!accepted) {
        Eigen::MatrixXd damped = normal;
        Eigen::VectorXd rhs = -grad;
        for (std::size_t i = 0; i < n; ++i) {
          const auto ii = static_cast<Eigen::Index>(i);
          if (!active[i]) {
            damped.row(ii).setZero();
            damped.col(ii).setZero();
            damped(ii, ii) = 1.0;
            rhs[ii] = 0.0;
          } else {
            damped(ii, ii) += lambda * std::max(normal(ii, ii), diag_floor);
          }
        }
        const Eigen::VectorXd step = damped.ldlt().solve(rhs);
        std::vector<double> trial(n);
        double step_norm = 0.0, x_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          trial[i] = std::clamp(x[i] + step[static_cast<Eigen::Index>(i)], lo_[i], hi_[i]);
          step_norm += (trial[i] - x[i]) * (trial[i] - x[i]);
          x_norm += x[i] * x[i];
        }
        if (!std::isfinite(step_norm) || std::sqrt(step_norm) <= 1e-10 * std::sqrt(x_norm)) {
          converged = true;
          break;
        }
        Eigen::VectorXd rt;
        const double trial_cost = evaluate(trial, &rt);
        if (trial_cost < cost) {
          const double rel = (cost - trial_cost) / cost;
          x = std::move(trial);
          r = std::move(rt);
          cost = trial_cost;
          out.history.push_back(cost);
          lambda = std::max(lambda * 0.1, 1e-12);
          accepted = true;
          if (rel < options_.tolerance || residual(cost) <= options_.tolerance * obs_rms_) {
            converged = true;
          }
        } else {
          lambda *= 10.0;
          if (lambda > 1e20) break;
        }
      }
      if (!accepted && !converged) break;
    }
    out.x = std::move(x);
    out.cost = cost;
    out.iterations = it;
    out.converged = converged;
    return out;
  }

 private:
  const FitProblem& problem_;
  const FitOptions& options_;
  std::vector<double> scale_, lo_, hi_, sqrt_w_;
  double weight_sum_ = 0.0;
  double obs_rms_ = 0.0;
};

std::vector<cplx> stack_s(const SMatrix& s) {
  std::vector<cplx> out;
  out.reserve(4 * s.size());
  for (const SParams& p : s.points()) {
    out.push_back(p.s11);
    out.push_back(p.s21);
    out.push_back(p.s12);
    out.push_back(p.s22);
  }
  return out;
}

}  // namespace

ResonancePair extract_fs_fp(std::span<const cplx> y, const FrequencyGrid& grid) {
  if (y.size() != grid.size()) throw DimensionError("admittance count does not match grid");
  const std::size_t n = y.size();
  std::vector<double> log_mag(n);
  for (std::size_t i = 0; i < n; ++i) log_mag[i] = std::log(std::abs(y[i]));

  const std::size_t imax =
      static_cast<std::size_t>(std::max_element(log_mag.begin(), log_mag.end()) - log_mag.begin());
  if (imax == 0 || imax + 1 >= n) {
    throw ExtractionError("|Y| maximum lies on the sweep boundary; no interior resonance");
  }
  const std::size_t imin = static_cast<std::size_t>(
      std::min_element(log_mag.begin() + static_cast<std::ptrdiff_t>(imax), log_mag.end()) -
      log_mag.begin());
  if (imin + 1 >= n || imin == imax) {
    throw ExtractionError("|Y| minimum lies on the sweep boundary; no interior anti-resonance");
  }
  return {refine(grid, log_mag, imax), refine(grid, log_mag, imin)};
}

double extract_kt2(double fs_hz, double fp_hz) {
  if (!(fp_hz >= fs_hz) || !(fs_hz > 0.0)) {
    throw DomainError("kt2 extraction needs fp >= fs > 0");
  }
  return (fp_hz * fp_hz - fs_hz * fs_hz) / (fp_hz * fp_hz) / kCouplingScale;
}

QEstimate extract_q(std::span<const cplx> y, const FrequencyGrid& grid, double fs_hz) {
  if (y.size() != grid.size()) throw DimensionError("admittance count does not match grid");
  if (!(fs_hz > grid.front() && fs_hz < grid.back())) {
    throw ExtractionError("fs is not inside the sweep");
  }
  std::size_t i = nearest_index(grid, fs_hz);
  i = std::clamp<std::size_t>(i, 1, grid.size() - 2);
  double d = std::arg(y[i + 1]) - std::arg(y[i - 1]);
  d -= kTwoPi * std::round(d / kTwoPi);
  const double slope = d / (grid[i + 1] - grid[i - 1]);
  QEstimate out;
  out.q = 0.5 * fs_hz * std::abs(slope);
  out.precision_warning = precision_warning(grid, fs_hz, out.q);
  return out;
}

QEstimate extract_q_conductance(std::span<const cplx> y, const FrequencyGrid& grid,
                                double fs_hz) {
  if (y.size() != grid.size()) throw DimensionError("admittance count does not match grid");
  const std::size_t n = y.size();
  const std::size_t start = nearest_index(grid, fs_hz);
  std::size_t peak = start;
  while (peak + 1 < n && y[peak + 1].real() > y[peak].real()) ++peak;
  while (peak > 0 && y[peak - 1].real() > y[peak].real()) --peak;
  const double half = 0.5 * y[peak].real();

  std::size_t lo = peak;
  while (lo > 0 && y[lo].real() > half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < n && y[hi].real() > half) ++hi;
  if (y[lo].real() > half || y[hi].real() > half) {
    throw ExtractionError("conductance peak is not contained in the sweep");
  }
  auto cross = [&](std::size_t a, std::size_t b) {
    const double ga = y[a].real(), gb = y[b].real();
    return grid[a] + (half - ga) / (gb - ga) * (grid[b] - grid[a]);
  };
  const double f_lo = cross(lo, lo + 1);
  const double f_hi = cross(hi - 1, hi);
  QEstimate out;
  out.q = grid[peak] / (f_hi - f_lo);
  out.precision_warning = precision_warning(grid, fs_hz, out.q);
  return out;
}

double FitResult::value(const std::string& name) const {
  for (const Parameter& p : parameters) {
    if (p.name == name) return p.value;
  }
  throw InputError("fit result has no parameter '" + name + "'");
}

FitResult fit_model(const FitProblem& problem, const FitOptions& options) {
  const Solver solver(problem, options);
  const std::size_t n = solver.size();

  std::vector<std::vector<double>> starts{solver.normalised_start()};
  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.restarts; ++k) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> u(solver.lower(i), solver.upper(i));
      x[i] = u(rng);
    }
    starts.push_back(std::move(x));
  }

  std::vector<Solver::Outcome> outcomes(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(starts.size()); ++k) {
    try {
      outcomes[k] = solver.run(starts[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  // The caller's own start must be usable; random restarts may fail.
  if (errors[0]) std::rethrow_exception(errors[0]);

  std::size_t best = 0;
  for (std::size_t k = 1; k < outcomes.size(); ++k) {
    if (!errors[k] && outcomes[k].cost < outcomes[best].cost) best = k;
  }
  const Solver::Outcome& win = outcomes[best];

  FitResult result;
  result.residual = solver.residual(win.cost);
  if (!std::isfinite(result.residual)) throw FitError("fit residual is not finite");
  result.iterations = win.iterations;
  result.converged = win.converged;
  result.history = win.history;
  for (std::size_t i = 0; i < n; ++i) {
    Parameter p = problem.parameters[i];
    p.value = win.x[i] * solver.scale(i);
    const double span = p.upper - p.lower;
    if (p.value - p.lower <= 1e-9 * span || p.upper - p.value <= 1e-9 * span) {
      result.saturated.push_back(p.name);
    }
    result.parameters.push_back(std::move(p));
  }
  return result;
}

double get_design_parameter(const LadderDesign& d, const std::string& name) {
  if (name == "q" || name == "q_series") return d.series.q;
  if (name == "q_shunt") return d.shunt.q;
  if (name == "kt2" || name == "kt2_series") return d.series.kt2;
  if (name == "kt2_shunt") return d.shunt.kt2;
  if (name == "rs") return d.rs_ohm;
  if (name == "ls_series") return d.ls_series_h;
  if (name == "ls_shunt") return d.ls_shunt_h;
  if (name == "cp") return d.cp_f;
  if (name == "fs_series") return d.series.fs_hz;
  if (name == "fs_shunt") return d.shunt.fs_hz;
  if (name == "c0_series") return d.series.c0_f;
  if (name == "c0_shunt") return d.shunt.c0_f;
  throw InputError("unknown ladder parameter '" + name + "'");
}

void set_design_parameter(LadderDesign& d, const std::string& name, double v) {
  if (name == "q") {
    d.series.q = v;
    d.shunt.q = v;
  } else if (name == "kt2") {
    d.series.kt2 = v;
    d.shunt.kt2 = v;
  } else if (name == "q_series") {
    d.series.q = v;
  } else if (name == "q_shunt") {
    d.shunt.q = v;
  } else if (name == "kt2_series") {
    d.series.kt2 = v;
  } else if (name == "kt2_shunt") {
    d.shunt.kt2 = v;
  } else if (name == "rs") {
    d.rs_ohm = v;
  } else if (name == "ls_series") {
    d.ls_series_h = v;
  } else if (name == "ls_shunt") {
    d.ls_shunt_h = v;
  } else if (name == "cp") {
    d.cp_f = v;
  } else if (name == "fs_series") {
    d.series.fs_hz = v;
  } else if (name == "fs_shunt") {
    d.shunt.fs_hz = v;
  } else if (name == "c0_series") {
    d.series.c0_f = v;
  } else if (name == "c0_shunt") {
    d.shunt.c0_f = v;
  } else {
    throw InputError("unknown ladder parameter '" + name + "'");
  }
}

std::string design_parameter_unit(const std::string& name) {
  if (name == "rs") return "ohm";
  if (name == "ls_series" || name == "ls_shunt") return "H";
  if (name == "cp" || name == "c0_series" || name == "c0_shunt") return "F";
  if (name == "fs_series" || name == "fs_shunt") return "Hz";
  get_design_parameter(LadderDesign{}, name);  // rejects unknown names
  return "1";
}

FitProblem ladder_fit_problem(const SMatrix& observed, const LadderDesign& start,
                              const std::vector<std::string>& free, const Bounds& bounds,
                              std::span<const double> point_weights) {
  if (free.empty()) throw InputError("ladder fit needs at least one free parameter");
  for (const auto& [name, b] : bounds) {
    if (std::find(free.begin(), free.end(), name) == free.end()) {
      throw InputError("bounds given for parameter '" + name + "' which is not free");
    }
  }
  FitProblem p;
  p.observed = stack_s(observed);
  if (!point_weights.empty()) {
    if (point_weights.size() != observed.size()) {
      throw DimensionError("weight count does not match the observed grid");
    }
    for (double w : point_weights) p.weights.insert(p.weights.end(), 4, w);
  }
  for (const std::string& name : free) {
    Parameter q;
    q.name = name;
    q.unit = design_parameter_unit(name);
    q.value = get_design_parameter(start, name);
    const auto it = bounds.find(name);
    if (it != bounds.end()) {
      q.lower = it->second.first;
      q.upper = it->second.second;
    } else {
      q.lower = 0.25 * q.value;
      q.upper = 4.0 * q.value;
    }
    if (!(q.lower < q.upper)) throw InputError("empty bounds for parameter '" + name + "'");
    p.parameters.push_back(std::move(q));
  }
  const FrequencyGrid grid = observed.grid();
  p.model = [start, free, grid](std::span<const double> x) {
    LadderDesign d = start;
    for (std::size_t i = 0; i < free.size(); ++i) set_design_parameter(d, free[i], x[i]);
    return stack_s(build_network(d.to_spec(), grid));
  };
  return p;
}

LadderDesign apply_fit(LadderDesign design, const FitResult& result) {
  for (const Parameter& p : result.parameters) set_design_parameter(design, p.name, p.value);
  return design;
}

FitProblem resonator_fit_problem(std::span<const cplx> y, const FrequencyGrid& grid,
                                 const ResonatorSpec& start) {
  if (y.size() != grid.size()) throw DimensionError("admittance count does not match grid");
  FitProblem p;
  p.observed.assign(y.begin(), y.end());
  p.weights.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double mag = std::abs(y[i]);
    if (!(mag > 0.0)) throw InputError("admittance is zero at a sweep point");
    p.weights[i] = 1.0 / (mag * mag);
  }
  const double kt2_cap = 0.999 / kCouplingScale;
  p.parameters = {
      {"fs", "Hz", start.fs_hz, 0.8 * start.fs_hz, 1.25 * start.fs_hz},
      {"kt2", "1", std::min(start.kt2, 0.99 * kt2_cap), 1e-4, kt2_cap},
      {"q", "1", start.q, std::max(0.02 * start.q, 0.1), 50.0 * start.q},
      {"c0", "F", start.c0_f, 0.2 * start.c0_f, 5.0 * start.c0_f},
  };
  p.model = [grid](std::span<const double> x) {
    return admittance(derive_mbvd({x[0], x[1], x[2], x[3]}), grid);
  };
  return p;
}

ResonatorSpec extract_resonator(std::span<const cplx> y, const FrequencyGrid& grid,
                                const FitOptions& options) {
  const ResonancePair pair = extract_fs_fp(y, grid);
  ResonatorSpec start;
  start.fs_hz = pair.fs_hz;
  start.kt2 = extract_kt2(pair.fs_hz, pair.fp_hz);
  start.q = std::max(extract_q(y, grid, pair.fs_hz).q, 1.0);
  // Far above fp the motional branch is a small inductive load on c0.
  const std::size_t last = grid.size() - 1;
  start.c0_f = y[last].imag() / (kTwoPi * grid[last]);
  if (!(start.c0_f > 0.0)) start.c0_f = y[0].imag() / (kTwoPi * grid[0]);
  if (!(start.c0_f > 0.0)) throw ExtractionError("admittance is not capacitive off resonance");

  const FitResult fit = fit_model(resonator_fit_problem(y, grid, start), options);
  return {fit.value("fs"), fit.value("kt2"), fit.value("q"), fit.value("c0")};
}

}  // namespace lnf
