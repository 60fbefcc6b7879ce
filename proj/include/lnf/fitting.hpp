#pragma once

// Resonator parameter extraction and bounded least-squares fitting of
// circuit models to swept complex responses.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lnf/ladder.hpp"
#include "lnf/netcore.hpp"
#include "lnf/resonator.hpp"

namespace lnf {

struct ResonancePair {
  double fs_hz = 0.0;
  double fp_hz = 0.0;
};

// fs = argmax |Y|, fp = argmin |Y| above fs, each refined by a parabola
// through log|Y| at the extremum and its neighbours. Throws
// ExtractionError when either extremum lies on the grid boundary.
ResonancePair extract_fs_fp(std::span<const cplx> y, const FrequencyGrid& grid);

// kt2 = (pi^2/8)(fp^2 - fs^2)/fp^2; zero when fp == fs. Throws DomainError
// when fp < fs.
double extract_kt2(double fs_hz, double fp_hz);

struct QEstimate {
  double q = 0.0;
  // Fewer than kMinPointsPerLinewidth samples inside fs/Q.
  bool precision_warning = false;
};

inline constexpr int kMinPointsPerLinewidth = 5;

// Phase-slope Q: (fs/2)|d arg(Y)/df| at the sample nearest fs.
QEstimate extract_q(std::span<const cplx> y, const FrequencyGrid& grid, double fs_hz);

// Q from the half-power width of the Re(Y) peak around fs.
QEstimate extract_q_conductance(std::span<const cplx> y, const FrequencyGrid& grid,
                                double fs_hz);

// Parameter vector entry with box bounds.
struct Parameter {
  std::string name;
  std::string unit;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct FitOptions {
  int max_iterations = 200;
  // Relative cost change (and relative residual) that counts as converged.
  double tolerance = 1e-10;
  std::uint64_t seed = 1;
  // Extra starts drawn uniformly inside the bounds.
  int restarts = 0;
};

struct FitResult {
  std::vector<Parameter> parameters;
  // sqrt(sum w |model - observed|^2 / sum w)
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // Names of parameters that finished on a bound.
  std::vector<std::string> saturated;
  // Cost after every accepted iteration of the winning start.
  std::vector<double> history;

  double value(const std::string& name) const;
};

// Maps a parameter vector (ordered as FitProblem::parameters) to a
// response vector of the same length as FitProblem::observed. Must be
// safe to call concurrently.
using ResponseModel = std::function<std::vector<cplx>(std::span<const double>)>;

struct FitProblem {
  std::vector<cplx> observed;
  // Empty means uniform.
  std::vector<double> weights;
  ResponseModel model;
  std::vector<Parameter> parameters;
};

// Damped least squares (Levenberg-Marquardt) with a central-difference
// Jacobian and projection onto the bounds. Only cost-decreasing steps are
// accepted. Throws FitError for a non-finite starting cost or invalid
// bounds.
FitResult fit_model(const FitProblem& problem, const FitOptions& options = {});

// Names accepted by ladder templates: q, q_series, q_shunt, kt2, rs,
// ls_series, ls_shunt, cp, fs_series, fs_shunt, c0_series, c0_shunt.
double get_design_parameter(const LadderDesign& design, const std::string& name);
void set_design_parameter(LadderDesign& design, const std::string& name, double value);
std::string design_parameter_unit(const std::string& name);

using Bounds = std::map<std::string, std::pair<double, double>>;

// Stacks S11, S21, S12, S22 of every grid point. Initial values come from
// the template; names absent from bounds get [0.25x, 4x] of the initial.
// Per-point weights (empty for uniform) apply to all four entries.
FitProblem ladder_fit_problem(const SMatrix& observed, const LadderDesign& start,
                              const std::vector<std::string>& free, const Bounds& bounds = {},
                              std::span<const double> point_weights = {});

LadderDesign apply_fit(LadderDesign design, const FitResult& result);

// Fits fs, kt2, q, c0 of a bare MBVD resonator to a complex admittance,
// weighting each point by 1/|Y|^2.
FitProblem resonator_fit_problem(std::span<const cplx> y, const FrequencyGrid& grid,
                                 const ResonatorSpec& start);

// Extrema and phase-slope estimates refined by resonator_fit_problem.
ResonatorSpec extract_resonator(std::span<const cplx> y, const FrequencyGrid& grid,
                                const FitOptions& options = {});

}  // namespace lnf
