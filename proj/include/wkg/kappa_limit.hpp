#pragma once

#include "wkg/analysis.hpp"

namespace wkg {

/// Algebraic limit of the relaxation unknown (kappa -> 0):
///   rho_alg = 8 pi (-(d_t phi)^2 + (d_r phi)^2 + (c^2/2) phi^2).
std::vector<double> algebraic_rho(const FieldChannels& phi, double c);

/// rho_alg evaluated on a state's phi channels.
std::vector<double> algebraic_rho(const EvolutionState& state, const ModelSystem& model);

/// Build the evolved state for a model from closed-form initial data on the
/// starting surface. For f(R)-type models the relaxation unknown is
/// initialized well-prepared (rho_0 = rho_alg of the data, rho_1 = its time
/// derivative) or to zero, per the data's rho_init.
EvolutionState make_initial_state(const InitialData& data, const ModelSystem& model,
                                  const RadialGrid& grid, TimeAxis axis, double start);

struct SweepConfig {
  std::vector<double> kappas;  // strictly decreasing, positive
  double c = 1.0;
  double q = 1.0;
  NonlinearityMenu menu;
  InitialData data;
  RadialGrid grid;
  SchemeConfig scheme;
  TimeAxis axis = TimeAxis::Cartesian;
  double start = 2.0;
  double end = 6.0;
  double cadence = 0.25;

  void validate() const;
};

struct KappaResult {
  double kappa = 0.0;
  double err_rho = 0.0;  // sup_s L2(rho_k - rho_alg)
  double err_u = 0.0;    // sup_s L2(u_k - u_ref)
  double err_phi = 0.0;
  bool failed = false;
  std::string message;
};

struct ConvergenceReport {
  std::vector<KappaResult> entries;
  double slope_rho = 0.0;  // log-log slope over the valid entries (>= 3 needed)
  double slope_u = 0.0;
  double slope_phi = 0.0;
  int valid = 0;
  double q_echo = 1.0;
};

/// Runs the f(R) models across the kappa list against a shared Einstein-type
/// reference and measures relaxation errors at the recording cadence.
/// Members run in parallel; a diverging member is marked failed and excluded.
ConvergenceReport sweep(const SweepConfig& config);

std::string format_report(const ConvergenceReport& report);

}  // namespace wkg
