#include "wkg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wkg {

namespace {

// Centered first derivative with even-parity ghosts at the origin and
// one-sided closure at the outer edge.
void d1_even(const std::vector<double>& f, double dr, std::vector<double>& out) {
  const int n = int(f.size());
  const double inv2 = 1.0 / (2.0 * dr);
  out[0] = 0.0;  // even parity
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
}

// Centered second derivative with even-parity ghosts at the origin.
void d2_even(const std::vector<double>& f, double dr, std::vector<double>& out) {
  const int n = int(f.size());
  const double inv = 1.0 / (dr * dr);
  out[0] = 2.0 * (f[1] - f[0]) * inv;
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * inv;
}

double one_sided_d1(const std::vector<double>& f, int n, double dr) {
  return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dr);
}

// Fourth-difference Kreiss-Oliger dissipation with even ghosts at the
// origin; the outer two nodes are left untouched.
void add_dissipation(const std::vector<double>& f, double eps, double dr,
                     std::vector<double>& rhs) {
  if (eps == 0.0) return;
  const int n = int(f.size());
  const double scale = -eps / (16.0 * dr);
  auto at = [&](int i) { return f[i < 0 ? -i : i]; };
  for (int i = 0; i < n - 2; ++i) {
    double d4 = at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2);
    rhs[i] += scale * d4;
  }
}

struct SpongeProfile {
  std::vector<double> sigma;
  static SpongeProfile make(const RadialGrid& grid, const SchemeConfig& scheme) {
    SpongeProfile p;
    p.sigma.assign(grid.n, 0.0);
    if (scheme.sponge_width <= 0.0) return p;
    const double r_on = grid.r_max() - scheme.sponge_width;
    for (int i = 0; i < grid.n; ++i) {
      double r = grid.r(i);
      if (r > r_on) {
        double x = (r - r_on) / scheme.sponge_width;
        p.sigma[i] = scheme.sponge_strength * x * x;
      }
    }
    return p;
  }
};

struct Workspace {
  std::vector<std::vector<double>> d1f, d1v, d2f, ur;
  std::vector<double> tmp;
  SpongeProfile sponge;

  void resize(int unknowns, int n) {
    auto fit = [&](std::vector<std::vector<double>>& a) {
      a.resize(unknowns);
      for (auto& v : a) v.resize(n);
    };
    fit(d1f);
    fit(d1v);
    fit(d2f);
    fit(ur);
  }
};

// Right hand side of the first-order system. With `split_reaction` the rho
// pair's oscillator part (the value-rate coupling and the -rho/(3 kappa)
// reaction) is left out; it is then advanced separately by its exact
// propagator.
void eval_rhs(const EvolutionState& y, const ModelSystem& model, const SchemeConfig& scheme,
              Workspace& ws, bool split_reaction, std::vector<FieldPair>& rhs) {
  const int n = y.n();
  const int nu = model.unknowns();
  const double dr = y.grid.spacing;
  ws.resize(nu, n);

  const bool hyper = y.axis == TimeAxis::Hyperboloidal;
  const double s = y.time;

  // Channel derivatives and Cartesian radial derivatives per unknown.
  std::vector<FieldChannels> chans(nu);
  for (int k = 0; k < nu; ++k) {
    d1_even(y.fields[k].f, dr, ws.d1f[k]);
    d1_even(y.fields[k].ft, dr, ws.d1v[k]);
    d2_even(y.fields[k].f, dr, ws.d2f[k]);
    for (int i = 0; i < n; ++i) {
      double slope = hyper ? y.grid.r(i) / lift(s, y.grid.r(i)) : 0.0;
      ws.ur[k][i] = ws.d1f[k][i] - slope * y.fields[k].ft[i];
    }
    chans[k] = FieldChannels{y.fields[k].f, y.fields[k].ft, ws.ur[k]};
  }
  Sources src = source_terms(model, chans);

  const double kappa = model.kind() == ModelSystem::Kind::FR ? model.fr_model().kappa : 0.0;

  for (int k = 0; k < nu; ++k) {
    const auto& f = y.fields[k].f;
    const auto& v = y.fields[k].ft;
    auto& df = rhs[k].f;
    auto& dv = rhs[k].ft;
    df.resize(n);
    dv.resize(n);

    const double m2 = model.mass_sq(k);
    const std::vector<double>* S = k == 0 ? &src.u : (k == 1 ? &src.phi : &src.rho_rhs);
    const bool is_rho = (model.kind() == ModelSystem::Kind::FR && k == 2);

    const bool drop_reaction = is_rho && split_reaction;

    if (!hyper) {
      for (int i = 0; i < n - 1; ++i) {
        df[i] = drop_reaction ? 0.0 : v[i];
        double lap = i == 0 ? 3.0 * ws.d2f[k][0]
                            : ws.d2f[k][i] + 2.0 / y.grid.r(i) * ws.d1f[k][i];
        double extra;
        if (is_rho) {
          extra = drop_reaction ? (*S)[i] / (3.0 * kappa)
                                : (f[i] + (*S)[i]) / (3.0 * kappa);
        } else {
          extra = m2 * f[i] + (*S)[i];
        }
        dv[i] = lap - extra;
      }
      // Outgoing Sommerfeld closure (d_t + d_r + 1/r) applied to both channels.
      const double rb = y.grid.r_max();
      df[n - 1] = -one_sided_d1(f, n, dr) - f[n - 1] / rb;
      dv[n - 1] = -one_sided_d1(v, n, dr) - v[n - 1] / rb;
    } else {
      for (int i = 0; i < n - 1; ++i) {
        const double r = y.grid.r(i);
        const double t = lift(s, r);
        df[i] = drop_reaction ? 0.0 : (s / t) * v[i];
        double bracket;
        if (i == 0) {
          bracket = 3.0 * ws.d2f[k][0] - (s * s / (t * t * t) + 2.0 / t) * v[0];
        } else {
          bracket = ws.d2f[k][i] - (s * s / (t * t * t)) * v[i] -
                    (2.0 * r / t) * ws.d1v[k][i] + (2.0 / r) * ws.d1f[k][i] -
                    (2.0 / t) * v[i];
        }
        if (is_rho) {
          bracket -= drop_reaction ? (*S)[i] / (3.0 * kappa)
                                   : (f[i] + (*S)[i]) / (3.0 * kappa);
        } else {
          bracket -= m2 * f[i] + (*S)[i];
        }
        dv[i] = (t / s) * bracket;
      }
      // Outgoing closure along the slice; the outgoing characteristic speed
      // is (t + r) / s.
      const double rb = y.grid.r_max();
      const double tb = lift(s, rb);
      const double c_out = (tb + rb) / s;
      df[n - 1] = -c_out * (one_sided_d1(f, n, dr) + f[n - 1] / rb);
      dv[n - 1] = -c_out * (one_sided_d1(v, n, dr) + v[n - 1] / rb);
    }

    add_dissipation(f, scheme.dissipation, dr, df);
    add_dissipation(v, scheme.dissipation, dr, dv);

    if (model.kg_like(k)) {
      for (int i = 0; i < n; ++i)
        if (ws.sponge.sigma[i] != 0.0) dv[i] -= ws.sponge.sigma[i] * v[i];
    }
  }
}

void check_finite_state(const EvolutionState& y) {
  for (std::size_t k = 0; k < y.fields.size(); ++k) {
    const auto& fp = y.fields[k];
    for (int i = 0; i < y.n(); ++i) {
      if (!std::isfinite(fp.f[i]) || !std::isfinite(fp.ft[i]))
        throw RuntimeAbort("non-finite field " + std::to_string(k) + " at node " +
                           std::to_string(i) + ", time " + std::to_string(y.time));
    }
  }
}

}  // namespace

SliceGeom EvolutionState::geom() const {
  if (axis == TimeAxis::Hyperboloidal)
    return SliceGeom::from_chart(SliceChart(time, grid));
  return SliceGeom::plane(time, grid);
}

void SchemeConfig::validate(const RadialGrid& grid, TimeAxis axis) const {
  if (!(cfl > 0.0 && cfl <= 0.5))
    throw std::invalid_argument("SchemeConfig: CFL number must lie in (0, 0.5]");
  if (spatial_order != 2)
    throw std::invalid_argument("SchemeConfig: only 2nd-order space is supported");
  if (!(dissipation >= 0.0 && dissipation < 1.0))
    throw std::invalid_argument("SchemeConfig: dissipation coefficient must lie in [0, 1)");
  if (axis == TimeAxis::Cartesian && step > 0.0 && step > cfl * grid.spacing + 1e-15)
    throw std::invalid_argument("SchemeConfig: step exceeds CFL * spacing");
  if (sponge_width < 0.0 || sponge_width >= grid.r_max())
    throw std::invalid_argument("SchemeConfig: sponge width out of range");
}

StateDerivs compute_state_derivs(const EvolutionState& state, const ModelSystem& model) {
  const int nu = model.unknowns();
  const int n = state.n();
  const double dr = state.grid.spacing;
  const bool hyper = state.axis == TimeAxis::Hyperboloidal;

  StateDerivs d;
  d.dr_f.resize(nu);
  d.dr_ft.resize(nu);
  d.u_r.resize(nu);
  std::vector<FieldChannels> chans(nu);
  for (int k = 0; k < nu; ++k) {
    d.dr_f[k].resize(n);
    d.dr_ft[k].resize(n);
    d.u_r[k].resize(n);
    d1_even(state.fields[k].f, dr, d.dr_f[k]);
    d1_even(state.fields[k].ft, dr, d.dr_ft[k]);
    for (int i = 0; i < n; ++i) {
      double slope = hyper ? state.grid.r(i) / lift(state.time, state.grid.r(i)) : 0.0;
      d.u_r[k][i] = d.dr_f[k][i] - slope * state.fields[k].ft[i];
    }
    chans[k] = FieldChannels{state.fields[k].f, state.fields[k].ft, d.u_r[k]};
  }
  d.sources = source_terms(model, chans);
  return d;
}

std::vector<std::vector<double>> accelerations(const EvolutionState& state,
                                               const ModelSystem& model) {
  const int nu = model.unknowns();
  const int n = state.n();
  const double dr = state.grid.spacing;
  SliceGeom geom = state.geom();
  StateDerivs d = compute_state_derivs(state, model);
  const double kappa = model.kind() == ModelSystem::Kind::FR ? model.fr_model().kappa : 0.0;

  std::vector<std::vector<double>> acc(nu, std::vector<double>(n));
  std::vector<double> wr(n);
  for (int k = 0; k < nu; ++k) {
    // w = d_r u as a surface function; u_tt from the transformed equation
    //   u_tt (1 - (dt/dr)^2) = w' - (dt/dr) v' + (2/r) w - m^2 u - S.
    d1_even(d.u_r[k], dr, wr);
    const std::vector<double>* S =
        k == 0 ? &d.sources.u : (k == 1 ? &d.sources.phi : &d.sources.rho_rhs);
    const bool is_rho = (model.kind() == ModelSystem::Kind::FR && k == 2);
    const double m2 = model.mass_sq(k);
    for (int i = 0; i < n; ++i) {
      double slope = geom.dt_dr[i];
      double curv = i == 0 ? 2.0 * wr[0] : (2.0 / geom.grid.r(i)) * d.u_r[k][i];
      double extra = is_rho ? (state.fields[k].f[i] + (*S)[i]) / (3.0 * kappa)
                            : m2 * state.fields[k].f[i] + (*S)[i];
      double num = wr[i] - slope * d.dr_ft[k][i] + curv - extra;
      acc[k][i] = num / (1.0 - slope * slope);
    }
  }
  return acc;
}

double cfl_step(const EvolutionState& state, const SchemeConfig& scheme) {
  const double dr = state.grid.spacing;
  if (state.axis == TimeAxis::Cartesian)
    return scheme.step > 0.0 ? scheme.step : scheme.cfl * dr;
  const double rb = state.grid.r_max();
  const double tb = lift(state.time, rb);
  double dt = scheme.cfl * dr * state.time / (tb + rb);
  if (scheme.step > 0.0) dt = std::min(dt, scheme.step);
  return dt;
}

namespace {

// Exact propagator of the reaction pair (rho, sigma): a rotation with
// frequency 1/sqrt(3 kappa). In hyperboloidal time the coupling carries
// (s/t) and the reaction (t/s); the product leaves the frequency unchanged
// and only conjugates the rotation.
void rotate_reaction(EvolutionState& y, const ModelSystem& model, double dt) {
  const double kappa = model.fr_model().kappa;
  const double mu = std::sqrt(3.0 * kappa);
  const double theta = dt / mu;
  const double cs = std::cos(theta), sn = std::sin(theta);
  auto& rho = y.fields[2];
  const bool hyper = y.axis == TimeAxis::Hyperboloidal;
  for (int i = 0; i < y.n(); ++i) {
    double a = 1.0;  // value-rate coupling factor
    if (hyper) a = y.time / lift(y.time, y.grid.r(i));
    double f = rho.f[i], v = rho.ft[i];
    rho.f[i] = cs * f + a * mu * sn * v;
    rho.ft[i] = -(sn / (a * mu)) * f + cs * v;
  }
}

}  // namespace

EvolutionState step(const EvolutionState& state, const ModelSystem& model,
                    const SchemeConfig& scheme, double dt) {
  scheme.validate(state.grid, state.axis);
  if (state.axis == TimeAxis::Cartesian && dt > scheme.cfl * state.grid.spacing * (1.0 + 1e-12))
    throw std::invalid_argument("step: CFL violation");
  if (int(state.fields.size()) != model.unknowns())
    throw std::invalid_argument("step: state does not match the model's unknowns");

  static thread_local Workspace ws;
  ws.sponge = SpongeProfile::make(state.grid, scheme);

  const int nu = model.unknowns();
  // Strang split in stiff mode: half rotation, explicit RK4 on the rest,
  // half rotation. The rotation integrates the linear reaction exactly and
  // unconditionally stably, without biasing the relaxation manifold.
  const bool split = scheme.stiff_rho && model.kind() == ModelSystem::Kind::FR;

  EvolutionState work = state;
  if (split) rotate_reaction(work, model, 0.5 * dt);

  auto axpy = [&](const EvolutionState& base, double a, const std::vector<FieldPair>& k,
                  EvolutionState& out) {
    out = base;
    for (int u = 0; u < nu; ++u)
      for (int i = 0; i < base.n(); ++i) {
        out.fields[u].f[i] = base.fields[u].f[i] + a * k[u].f[i];
        out.fields[u].ft[i] = base.fields[u].ft[i] + a * k[u].ft[i];
      }
  };

  std::vector<FieldPair> k1(nu), k2(nu), k3(nu), k4(nu);
  EvolutionState stage;

  eval_rhs(work, model, scheme, ws, split, k1);

  axpy(work, 0.5 * dt, k1, stage);
  stage.time = work.time + 0.5 * dt;
  eval_rhs(stage, model, scheme, ws, split, k2);

  axpy(work, 0.5 * dt, k2, stage);
  stage.time = work.time + 0.5 * dt;
  eval_rhs(stage, model, scheme, ws, split, k3);

  axpy(work, dt, k3, stage);
  stage.time = work.time + dt;
  eval_rhs(stage, model, scheme, ws, split, k4);

  EvolutionState next = work;
  next.time = work.time + dt;
  for (int u = 0; u < nu; ++u)
    for (int i = 0; i < state.n(); ++i) {
      next.fields[u].f[i] =
          work.fields[u].f[i] +
          dt / 6.0 * (k1[u].f[i] + 2.0 * k2[u].f[i] + 2.0 * k3[u].f[i] + k4[u].f[i]);
      next.fields[u].ft[i] =
          work.fields[u].ft[i] +
          dt / 6.0 * (k1[u].ft[i] + 2.0 * k2[u].ft[i] + 2.0 * k3[u].ft[i] + k4[u].ft[i]);
    }
  if (split) rotate_reaction(next, model, 0.5 * dt);
  check_finite_state(next);
  return next;
}

Trajectory run(EvolutionState state, const ModelSystem& model, const SchemeConfig& scheme,
               const RunOptions& options) {
  scheme.validate(state.grid, state.axis);
  if (options.end <= state.time)
    throw std::invalid_argument("run: end time must exceed the start time");
  if (!(options.cadence > 0.0)) throw std::invalid_argument("run: cadence must be positive");

  Trajectory traj;
  traj.axis = state.axis;
  traj.grid = state.grid;

  auto record = [&](const EvolutionState& y) {
    SliceRecord rec;
    if (options.recorder) {
      rec = options.recorder(y);
    } else {
      rec.label = y.time;
      for (const auto& fp : y.fields) {
        double m = 0.0;
        for (double v : fp.f) m = std::max(m, std::fabs(v));
        rec.sup.push_back(m);
      }
    }
    traj.records.push_back(std::move(rec));
    if (options.store_snapshots) traj.snapshots.push_back(y);
  };

  record(state);
  if (options.store_levels) traj.levels.push_back(state);

  const double start = state.time;
  int next_rec = 1;
  const double eps = 1e-10;
  while (state.time < options.end - eps) {
    double dt = cfl_step(state, scheme);
    double target = std::min(options.end, start + next_rec * options.cadence);
    if (target - state.time < dt) dt = target - state.time;
    state = step(state, model, scheme, dt);
    if (options.store_levels) traj.levels.push_back(state);
    if (state.time >= start + next_rec * options.cadence - eps) {
      record(state);
      ++next_rec;
    }
  }
  return traj;
}

EvolutionState interpolate_to_slice(const Trajectory& trajectory, double s) {
  if (trajectory.axis != TimeAxis::Cartesian)
    throw std::invalid_argument("interpolate_to_slice: requires a Cartesian trajectory");
  const auto& levels = trajectory.levels;
  if (levels.size() < 4)
    throw std::invalid_argument("interpolate_to_slice: requires stored time levels");

  const RadialGrid& grid = trajectory.grid;
  const int n = grid.n;
  const std::size_t nu = levels.front().fields.size();

  EvolutionState out;
  out.time = s;
  out.axis = TimeAxis::Hyperboloidal;
  out.grid = grid;
  out.fields.resize(nu);
  for (auto& fp : out.fields) {
    fp.f.assign(n, 0.0);
    fp.ft.assign(n, 0.0);
  }

  for (int i = 0; i < n; ++i) {
    const double t_star = lift(s, grid.r(i));
    // Bracketing index: levels[j].time <= t_star <= levels[j+1].time with a
    // full 4-point stencil available.
    int lo = 0, hi = int(levels.size()) - 1;
    if (t_star < levels.front().time - 1e-12 || t_star > levels.back().time + 1e-12)
      throw std::invalid_argument("interpolate_to_slice: slice not bracketed at node " +
                                  std::to_string(i));
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (levels[mid].time <= t_star)
        lo = mid;
      else
        hi = mid;
    }
    int j0 = std::clamp(lo - 1, 0, int(levels.size()) - 4);
    double ts[4], w[4];
    for (int a = 0; a < 4; ++a) ts[a] = levels[j0 + a].time;
    for (int a = 0; a < 4; ++a) {
      double num = 1.0, den = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (a == b) continue;
        num *= (t_star - ts[b]);
        den *= (ts[a] - ts[b]);
      }
      w[a] = num / den;
    }
    for (std::size_t k = 0; k < nu; ++k) {
      double vf = 0.0, vt = 0.0;
      for (int a = 0; a < 4; ++a) {
        vf += w[a] * levels[j0 + a].fields[k].f[i];
        vt += w[a] * levels[j0 + a].fields[k].ft[i];
      }
      out.fields[k].f[i] = vf;
      out.fields[k].ft[i] = vt;
    }
  }
  return out;
}

}  // namespace wkg
