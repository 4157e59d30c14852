#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "wkg/models.hpp"

namespace wkg {

enum class TimeAxis { Cartesian, Hyperboloidal };

struct FieldPair {
  std::vector<double> f;   // value
  std::vector<double> ft;  // time derivative d_t f (also in hyperboloidal mode)
};

struct EvolutionState {
  double time = 0.0;  // t (Cartesian) or s (hyperboloidal)
  TimeAxis axis = TimeAxis::Cartesian;
  RadialGrid grid;
  std::vector<FieldPair> fields;  // one per model unknown

  int n() const { return grid.n; }
  SliceGeom geom() const;
};

struct SchemeConfig {
  double step = 0.0;        // 0: derive from the CFL number
  double cfl = 0.4;         // <= 0.5
  int spatial_order = 2;    // fixed
  double dissipation = 0.0;  // Kreiss-Oliger coefficient, < 1
  bool stiff_rho = true;    // linearly-implicit reaction update for rho
  double sponge_width = 0.0;     // outer sponge width for KG unknowns (0: off)
  double sponge_strength = 2.0;

  void validate(const RadialGrid& grid, TimeAxis axis) const;
};

/// Radial derivatives of every channel plus the model sources; shared by the
/// stepper and by the norm reconstruction in the analysis module.
struct StateDerivs {
  std::vector<std::vector<double>> dr_f;   // d_r(value) along the surface
  std::vector<std::vector<double>> dr_ft;  // d_r(dt channel) along the surface
  std::vector<std::vector<double>> u_r;    // Cartesian radial derivative of f
  Sources sources;
};

StateDerivs compute_state_derivs(const EvolutionState& state, const ModelSystem& model);

/// d_t^2 of every unknown, reconstructed from the model equations on the
/// state's surface.
std::vector<std::vector<double>> accelerations(const EvolutionState& state,
                                               const ModelSystem& model);

/// One classical RK4 step of the first-order-in-time system. In stiff mode
/// the -rho/(3 kappa) reaction is advanced with a linearly implicit stage
/// value; all other terms are explicit.
EvolutionState step(const EvolutionState& state, const ModelSystem& model,
                    const SchemeConfig& scheme, double dt);

/// Largest stable step at the current time per the CFL number.
double cfl_step(const EvolutionState& state, const SchemeConfig& scheme);

struct SliceRecord {
  double label = 0.0;
  std::vector<double> sup;         // per unknown
  std::array<double, 3> energy{};  // E_0..E_2 totals (filled by the recorder)
};

struct Trajectory {
  TimeAxis axis = TimeAxis::Cartesian;
  RadialGrid grid;
  std::vector<SliceRecord> records;
  std::vector<EvolutionState> snapshots;  // cadence states, if requested
  std::vector<EvolutionState> levels;     // every time level, if requested
};

struct RunOptions {
  double end = 0.0;
  double cadence = 0.5;
  bool store_snapshots = false;
  bool store_levels = false;
  /// Optional norm recorder; when absent only sup norms are recorded.
  std::function<SliceRecord(const EvolutionState&)> recorder;
};

Trajectory run(EvolutionState state, const ModelSystem& model, const SchemeConfig& scheme,
               const RunOptions& options);

/// Cubic interpolation of a stored Cartesian trajectory onto the
/// hyperboloidal slice H_s, node by node; both channels are interpolated.
EvolutionState interpolate_to_slice(const Trajectory& trajectory, double s);

}  // namespace wkg
