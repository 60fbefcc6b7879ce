#pragma once

// Ladder filters assembled from MBVD resonators.
//
// Two evaluation paths produce the same SMatrix:
//   build_network            fused per-point kernel, OpenMP over frequency
//   build_network_reference  serial composition of the netcore whole-grid
//                            operations; kept as the test reference

#include <cstddef>
#include <vector>

#include "lnf/netcore.hpp"
#include "lnf/resonator.hpp"

namespace lnf {

enum class StageKind { Series, Shunt };

struct Stage {
  StageKind kind = StageKind::Series;
  MbvdModel resonator;
  // Identical copies connected in parallel.
  int multiplicity = 1;
  // Lead inductance in series with each copy.
  double branch_inductance_h = 0.0;
};

struct LadderSpec {
  std::vector<Stage> stages;
  double z0 = 50.0;
  // Feedthrough capacitance bridging input to output.
  double cp_f = 0.0;

  void validate() const;
};

// Behavioral description of a two-resonator ladder: one series and one
// shunt resonator design reused at every stage.
struct StagePlan {
  StageKind kind = StageKind::Series;
  int multiplicity = 1;
};

struct LadderDesign {
  ResonatorSpec series;
  ResonatorSpec shunt;
  double rs_ohm = 0.0;        // per resonator
  double ls_series_h = 0.0;
  double ls_shunt_h = 0.0;
  double cp_f = 0.0;
  double z0_ohm = 50.0;
  std::vector<StagePlan> topology;
  // Applied to every resonator.
  std::vector<SpurMode> spurs;

  LadderSpec to_spec() const;
};

// Shared resonator and parasitic values of the fabricated designs.
LadderDesign reference_design();
// Lower-order ladder: S P S S.
LadderDesign design_a();
// Higher-order ladder: P P P S P S.
LadderDesign design_b();

LadderSpec preset_design_a();
LadderSpec preset_design_b();

// Impedance (series stages) or admittance (shunt stages) of one stage.
cplx stage_immittance(const Stage& stage, double f_hz);
Abcd stage_abcd(const Stage& stage, double f_hz);

// Fused kernel. Indices where the feedthrough combination needed the |B|
// guard are appended to *perturbed when given.
SMatrix build_network(const LadderSpec& spec, const FrequencyGrid& grid,
                      std::vector<std::size_t>* perturbed = nullptr);

// Serial reference built from series_element / shunt_element / cascade /
// parallel_combine / abcd_to_s.
SMatrix build_network_reference(const LadderSpec& spec, const FrequencyGrid& grid,
                                std::vector<std::size_t>* perturbed = nullptr);

}  // namespace lnf
