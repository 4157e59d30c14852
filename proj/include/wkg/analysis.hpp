#pragma once

#include <utility>

#include "wkg/evolution.hpp"

namespace wkg {

/// Squared boost-based slice norm of one unknown,
///   ||f||^2_{H^n[s]} = sum_{|J| <= n} int |L^J f|^2 4 pi r^2 dr,
/// with L the radial boost and trapezoidal quadrature. n = 2 reconstructs
/// d_t^2 f from the model equations.
double slice_norm_sq(const EvolutionState& state, const ModelSystem& model, int unknown,
                     int n);

double slice_norm(const EvolutionState& state, const ModelSystem& model, int unknown, int n);

/// E_0..E_2 summed over the model's unknowns (entries above `max_order`
/// are zero).
std::array<double, 3> energy_levels(const EvolutionState& state, const ModelSystem& model,
                                    int max_order);

/// Recorder for run(): sup norms per unknown plus energy totals.
std::function<SliceRecord(const EvolutionState&)> make_norm_recorder(const ModelSystem& model,
                                                                     int max_order);

/// Interval norm per unknown over stored snapshots in [s0, s1]:
///   sup_s sum_{|I| + n <= N} ||d^I f||_{H^n[s]},
/// translations realized as d_t and d_r with d_t^2 from the model equations.
std::vector<double> interval_norm(const Trajectory& trajectory, const ModelSystem& model,
                                  int N, double s0, double s1);

struct DecayFit {
  double exponent = 0.0;
  double residual_se = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int samples = 0;
};

/// Least-squares slope of log(value) against log(label) inside the window.
/// Requires positive values and at least 10 samples.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double window_lo,
                   double window_hi);

struct MonitorVerdict {
  bool bounded = false;
  double worst_ratio = 0.0;
  double worst_label = 0.0;
};

/// Bounded iff max_s E_N(s) <= factor * E_N(s0) over the recorded slices.
MonitorVerdict energy_monitor(const std::vector<SliceRecord>& records, int order,
                              double factor);

}  // namespace wkg
