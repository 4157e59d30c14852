#include <cmath>

#include "doctest.h"
#include "wkg/analysis.hpp"

using namespace wkg;

namespace {

ModelSystem linear_wave() { return ModelSystem::einstein(WKGModel{1.0, {0.0, 0.0, false}}); }

EvolutionState slice_state(const RadialGrid& grid, double s,
                           const std::function<double(double, double)>& f,
                           const std::function<double(double, double)>& ft) {
  EvolutionState st;
  st.time = s;
  st.axis = TimeAxis::Hyperboloidal;
  st.grid = grid;
  st.fields.resize(2);
  for (auto& fp : st.fields) {
    fp.f.assign(grid.n, 0.0);
    fp.ft.assign(grid.n, 0.0);
  }
  for (int i = 0; i < grid.n; ++i) {
    double t = lift(s, grid.r(i));
    st.fields[0].f[i] = f(t, grid.r(i));
    st.fields[0].ft[i] = ft(t, grid.r(i));
  }
  return st;
}

}  // namespace

TEST_CASE("zero field has zero norm at every order") {
  RadialGrid grid = RadialGrid::uniform(0.05, 101);
  EvolutionState st = slice_state(grid, 2.0, [](double, double) { return 0.0; },
                                  [](double, double) { return 0.0; });
  ModelSystem model = linear_wave();
  for (int n = 0; n <= 2; ++n) CHECK(slice_norm(st, model, 0, n) == 0.0);
}

TEST_CASE("gaussian slice norm matches the closed-form integral") {
  // int exp(-2 r^2) 4 pi r^2 dr = (pi/2)^{3/2}.
  RadialGrid grid = RadialGrid::uniform(1e-3, 8001);
  EvolutionState st = slice_state(grid, 2.0, [](double, double) { return 0.0; },
                                  [](double, double) { return 0.0; });
  for (int i = 0; i < grid.n; ++i)
    st.fields[0].f[i] = std::exp(-grid.r(i) * grid.r(i));
  ModelSystem model = linear_wave();
  double got = slice_norm_sq(st, model, 0, 0);
  double expect = std::pow(M_PI / 2.0, 1.5);
  CHECK(std::fabs(got - expect) < 1e-6);
}

TEST_CASE("first-order norm matches a closed-form boost oracle") {
  // u = t^2 + r^2 on H_s: slice profile s^2 + 2 r^2, u_r = 2 r, u_t = 2 t,
  // L u = 4 r t. Exact integral of (u^2 + (Lu)^2) 4 pi r^2 dr on [0, R]:
  //   u^2 r^2 = (s^2 + 2 r^2)^2 r^2, (Lu)^2 r^2 = 16 r^4 (s^2 + r^2).
  const double s = 2.0, R = 2.0;
  RadialGrid grid = RadialGrid::uniform(5e-5, int(std::lround(R / 5e-5)) + 1);
  EvolutionState st = slice_state(grid, s, [](double t, double r) { return t * t + r * r; },
                                  [](double t, double) { return 2.0 * t; });
  ModelSystem model = linear_wave();
  double got = slice_norm_sq(st, model, 0, 1);

  auto I = [&](double p) { return std::pow(R, p + 1.0) / (p + 1.0); };
  double s2 = s * s;
  double exact = s2 * s2 * I(2) + 4.0 * s2 * I(4) + 4.0 * I(6)  // u^2 r^2
                 + 16.0 * (s2 * I(4) + I(6));                   // (Lu)^2 r^2
  exact *= 4.0 * M_PI;
  CHECK(std::fabs(got - exact) / exact < 1e-8);
}

TEST_CASE("slice norm converges at second order under refinement") {
  const double s = 2.0, R = 3.0;
  auto norm_at = [&](double dr) {
    RadialGrid grid = RadialGrid::uniform(dr, int(std::lround(R / dr)) + 1);
    EvolutionState st = slice_state(
        grid, s, [](double t, double r) { return std::exp(-r * r) * std::sin(t); },
        [](double t, double r) { return std::exp(-r * r) * std::cos(t); });
    return slice_norm_sq(st, linear_wave(), 0, 1);
  };
  double fine = norm_at(2.5e-4);
  double e1 = std::fabs(norm_at(4e-3) - fine);
  double e2 = std::fabs(norm_at(2e-3) - fine);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("norm orders are monotone") {
  RadialGrid grid = RadialGrid::uniform(0.01, 301);
  EvolutionState st = slice_state(
      grid, 2.0, [](double t, double r) { return std::exp(-r * r) * (1.0 + 0.1 * t); },
      [](double, double r) { return 0.1 * std::exp(-r * r); });
  ModelSystem model = linear_wave();
  double e0 = slice_norm_sq(st, model, 0, 0);
  double e1 = slice_norm_sq(st, model, 0, 1);
  double e2 = slice_norm_sq(st, model, 0, 2);
  CHECK(e0 <= e1);
  CHECK(e1 <= e2);
  CHECK(slice_norm_sq(st, model, 0, 0) > 0.0);
  CHECK_THROWS_AS(slice_norm_sq(st, model, 0, 3), std::invalid_argument);
}

TEST_CASE("interval norm: definition collapse and stationarity at N = 0") {
  RadialGrid grid = RadialGrid::uniform(0.02, 151);
  ModelSystem model = linear_wave();
  Trajectory traj;
  traj.axis = TimeAxis::Cartesian;
  traj.grid = grid;
  // A frozen profile replicated across planes.
  for (double t = 1.0; t <= 2.0 + 1e-9; t += 0.05) {
    EvolutionState st;
    st.time = t;
    st.axis = TimeAxis::Cartesian;
    st.grid = grid;
    st.fields.resize(2);
    for (auto& fp : st.fields) {
      fp.f.assign(grid.n, 0.0);
      fp.ft.assign(grid.n, 0.0);
    }
    for (int i = 0; i < grid.n; ++i)
      st.fields[0].f[i] = std::exp(-grid.r(i) * grid.r(i));
    traj.snapshots.push_back(std::move(st));
  }
  std::vector<double> n0 = interval_norm(traj, model, 0, 1.0, 2.0);
  double single = slice_norm(traj.snapshots.front(), model, 0, 0);
  CHECK(n0[0] == doctest::Approx(single).epsilon(1e-12));
  CHECK(n0[1] == 0.0);

  // Too few slices in range is an error.
  CHECK_THROWS_AS(interval_norm(traj, model, 0, 1.0, 1.2), std::invalid_argument);

  // N = 1 includes more terms, so it dominates N = 0.
  std::vector<double> n1 = interval_norm(traj, model, 1, 1.0, 2.0);
  CHECK(n1[0] >= n0[0]);
}

TEST_CASE("decay fit recovers exact power laws") {
  std::vector<std::pair<double, double>> s1, s3;
  for (double s = 2.0; s <= 60.0; s += 0.5) {
    s1.emplace_back(s, 7.0 / s);
    s3.emplace_back(s, 3.0 * std::pow(s, -1.5));
  }
  DecayFit f1 = fit_decay(s1, 5.0, 50.0);
  CHECK(std::fabs(f1.exponent + 1.0) < 1e-12);
  CHECK(f1.residual_se < 1e-12);
  DecayFit f3 = fit_decay(s3, 5.0, 50.0);
  CHECK(std::fabs(f3.exponent + 1.5) < 1e-12);

  // Window and positivity validation.
  CHECK_THROWS_AS(fit_decay(s1, 5.0, 6.0), std::invalid_argument);
  s1[10].second = -1.0;
  CHECK_THROWS_AS(fit_decay(s1, 5.0, 50.0), std::invalid_argument);
}

TEST_CASE("energy monitor verdicts") {
  std::vector<SliceRecord> zero(12), grow(12);
  for (int i = 0; i < 12; ++i) {
    zero[i].label = 2.0 + i;
    zero[i].energy = {0.0, 0.0, 0.0};
    grow[i].label = 2.0 + i;
    grow[i].energy = {1.0, 1.0, std::exp(0.5 * i)};
  }
  MonitorVerdict vz = energy_monitor(zero, 2, 2.0);
  CHECK(vz.bounded);
  CHECK(vz.worst_ratio == 0.0);

  MonitorVerdict vg = energy_monitor(grow, 2, 2.0);
  CHECK(!vg.bounded);
  CHECK(vg.worst_label == doctest::Approx(13.0));

  MonitorVerdict v0 = energy_monitor(grow, 0, 2.0);
  CHECK(v0.bounded);  // flat E0 series
  CHECK_THROWS_AS(energy_monitor({zero[0]}, 2, 2.0), std::invalid_argument);
}
