#include "wkg/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wkg {

namespace {

double trapz_weighted_sq(const std::vector<double>& f, const RadialGrid& grid) {
  // int f^2 4 pi r^2 dr, trapezoidal rule.
  double acc = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    double r = grid.r(i);
    double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
    acc += w * f[i] * f[i] * r * r;
  }
  return 4.0 * M_PI * grid.spacing * acc;
}

struct BoostInputs {
  SliceGeom geom;
  std::vector<double> u_r, u_t, u_tt, u_rt, u_rr;
};

// All surface-reconstructible derivatives of one unknown.
BoostInputs boost_inputs(const EvolutionState& state, const ModelSystem& model, int unknown,
                         bool need_second) {
  BoostInputs b;
  b.geom = state.geom();
  const auto& f = state.fields[unknown].f;
  const auto& v = state.fields[unknown].ft;
  const RadialGrid& grid = state.grid;

  b.u_t.assign(v.begin(), v.end());
  std::vector<double> d1f = radial_derivative(f, grid);
  std::vector<double> d1v = radial_derivative(v, grid);
  b.u_r.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) b.u_r[i] = d1f[i] - b.geom.dt_dr[i] * v[i];

  if (need_second) {
    b.u_tt = accelerations(state, model)[unknown];
    b.u_rt.resize(grid.n);
    b.u_rr.resize(grid.n);
    std::vector<double> d1ur = radial_derivative(b.u_r, grid);
    for (int i = 0; i < grid.n; ++i) {
      b.u_rt[i] = d1v[i] - b.geom.dt_dr[i] * b.u_tt[i];
      b.u_rr[i] = d1ur[i] - b.geom.dt_dr[i] * b.u_rt[i];
    }
  }
  return b;
}

}  // namespace

double slice_norm_sq(const EvolutionState& state, const ModelSystem& model, int unknown,
                     int n) {
  if (n < 0 || n > 2) throw std::invalid_argument("slice_norm: order must be 0, 1 or 2");
  if (unknown < 0 || unknown >= model.unknowns())
    throw std::invalid_argument("slice_norm: unknown index out of range");
  if (state.fields[unknown].ft.size() != state.fields[unknown].f.size())
    throw std::invalid_argument("slice_norm: missing time-derivative channel");

  const RadialGrid& grid = state.grid;
  double total = trapz_weighted_sq(state.fields[unknown].f, grid);
  if (n == 0) return total;

  BoostInputs b = boost_inputs(state, model, unknown, n >= 2);

  // L f = r d_t f + t d_r f.
  std::vector<double> Lf(grid.n);
  for (int i = 0; i < grid.n; ++i)
    Lf[i] = grid.r(i) * b.u_t[i] + b.geom.t[i] * b.u_r[i];
  total += trapz_weighted_sq(Lf, grid);
  if (n == 1) return total;

  // L^2 f = r^2 f_tt + 2 r t f_rt + t^2 f_rr + r f_r + t f_t, with f_tt
  // reconstructed from the model's own equation.
  std::vector<double> LLf(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double r = grid.r(i), t = b.geom.t[i];
    LLf[i] = r * r * b.u_tt[i] + 2.0 * r * t * b.u_rt[i] + t * t * b.u_rr[i] +
             r * b.u_r[i] + t * b.u_t[i];
  }
  total += trapz_weighted_sq(LLf, grid);
  return total;
}

double slice_norm(const EvolutionState& state, const ModelSystem& model, int unknown, int n) {
  return std::sqrt(slice_norm_sq(state, model, unknown, n));
}

std::array<double, 3> energy_levels(const EvolutionState& state, const ModelSystem& model,
                                    int max_order) {
  std::array<double, 3> e{};
  for (int n = 0; n <= std::min(max_order, 2); ++n)
    for (int k = 0; k < model.unknowns(); ++k) e[n] += slice_norm_sq(state, model, k, n);
  return e;
}

std::function<SliceRecord(const EvolutionState&)> make_norm_recorder(const ModelSystem& model,
                                                                     int max_order) {
  return [model, max_order](const EvolutionState& y) {
    SliceRecord rec;
    rec.label = y.time;
    for (const auto& fp : y.fields) {
      double m = 0.0;
      for (double v : fp.f) m = std::max(m, std::fabs(v));
      rec.sup.push_back(m);
    }
    rec.energy = energy_levels(y, model, max_order);
    return rec;
  };
}

std::vector<double> interval_norm(const Trajectory& trajectory, const ModelSystem& model,
                                  int N, double s0, double s1) {
  if (N < 0 || N > 2) throw std::invalid_argument("interval_norm: N must be 0, 1 or 2");
  std::size_t in_range = 0;
  for (const auto& st : trajectory.snapshots)
    if (st.time >= s0 - 1e-12 && st.time <= s1 + 1e-12) ++in_range;
  if (in_range < 10)
    throw std::invalid_argument("interval_norm: fewer than 10 recorded slices in range");

  std::vector<double> out(model.unknowns(), 0.0);
  for (const auto& st : trajectory.snapshots) {
    if (st.time < s0 - 1e-12 || st.time > s1 + 1e-12) continue;
    for (int k = 0; k < model.unknowns(); ++k) {
      BoostInputs b = boost_inputs(st, model, k, N >= 1);
      double sum = 0.0;
      // |I| = 0: boost norms up to order N of f itself.
      for (int n = 0; n <= N; ++n) sum += slice_norm(st, model, k, n);

      auto hn_norm = [&](const std::vector<double>& val, const std::vector<double>& val_t,
                         int order) {
        double tot = trapz_weighted_sq(val, st.grid);
        if (order >= 1) {
          std::vector<double> d1 = radial_derivative(val, st.grid);
          std::vector<double> Lf(st.grid.n);
          for (int i = 0; i < st.grid.n; ++i) {
            double vr = d1[i] - b.geom.dt_dr[i] * val_t[i];
            Lf[i] = st.grid.r(i) * val_t[i] + b.geom.t[i] * vr;
          }
          tot += trapz_weighted_sq(Lf, st.grid);
        }
        return std::sqrt(tot);
      };

      if (N >= 1) {
        // |I| = 1: d_t f with channel d_t^2 f, and d_r f with channel d_rt f,
        // at boost orders up to N - 1.
        int sub = N - 1;
        sum += hn_norm(b.u_t, b.u_tt, sub);
        sum += hn_norm(b.u_r, b.u_rt, sub);
      }
      if (N >= 2) {
        // |I| = 2 at boost order 0.
        sum += std::sqrt(trapz_weighted_sq(b.u_tt, st.grid));
        sum += std::sqrt(trapz_weighted_sq(b.u_rt, st.grid));
        sum += std::sqrt(trapz_weighted_sq(b.u_rr, st.grid));
      }
      out[k] = std::max(out[k], sum);
    }
  }
  return out;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double window_lo,
                   double window_hi) {
  std::vector<std::pair<double, double>> pts;
  for (auto& [s, y] : series) {
    if (s < window_lo - 1e-12 || s > window_hi + 1e-12) continue;
    if (!(s > 0.0)) throw std::invalid_argument("fit_decay: nonpositive abscissa");
    if (!(y > 0.0))
      throw std::invalid_argument("fit_decay: nonpositive value at s = " + std::to_string(s));
    pts.emplace_back(std::log(s), std::log(y));
  }
  if (pts.size() < 10)
    throw std::invalid_argument("fit_decay: need at least 10 samples in the window");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = double(pts.size());
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  double slope = (m * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / m;

  double ssr = 0.0;
  for (auto& [x, y] : pts) {
    double e = y - (intercept + slope * x);
    ssr += e * e;
  }
  DecayFit fit;
  fit.exponent = slope;
  fit.residual_se = pts.size() > 2 ? std::sqrt(ssr / (m - 2.0)) : 0.0;
  fit.window_lo = window_lo;
  fit.window_hi = window_hi;
  fit.samples = int(pts.size());
  return fit;
}

MonitorVerdict energy_monitor(const std::vector<SliceRecord>& records, int order,
                              double factor) {
  if (records.size() < 10)
    throw std::invalid_argument("energy_monitor: need at least 10 recorded slices");
  if (order < 0 || order > 2) throw std::invalid_argument("energy_monitor: bad order");

  const double e0 = records.front().energy[order];
  MonitorVerdict v;
  v.worst_ratio = 0.0;
  v.worst_label = records.front().label;
  for (const auto& rec : records) {
    double e = rec.energy[order];
    double ratio = e0 > 0.0 ? e / e0 : (e > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > v.worst_ratio) {
      v.worst_ratio = ratio;
      v.worst_label = rec.label;
    }
  }
  v.bounded = v.worst_ratio <= factor;
  return v;
}

}  // namespace wkg
