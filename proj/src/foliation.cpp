#include "wkg/foliation.hpp"

#include <cmath>
#include <string>

namespace wkg {

double lift(double s, double r) {
  if (!std::isfinite(s) || !std::isfinite(r))
    throw std::domain_error("lift: non-finite input");
  if (s <= 0.0) throw std::domain_error("lift: hyperboloidal time must be positive");
  if (r < 0.0) throw std::domain_error("lift: negative radius");
  return std::sqrt(s * s + r * r);
}

double project(double t, double r) {
  if (!std::isfinite(t) || !std::isfinite(r))
    throw std::domain_error("project: non-finite input");
  if (r < 0.0) throw std::domain_error("project: negative radius");
  if (t <= r)
    throw OutsideConeError("project: point (t=" + std::to_string(t) +
                           ", r=" + std::to_string(r) + ") lies outside the cone t > r");
  return std::sqrt((t - r) * (t + r));
}

RadialGrid RadialGrid::uniform(double spacing, int n) {
  if (!(spacing > 0.0)) throw std::invalid_argument("RadialGrid: spacing must be positive");
  if (n < 5) throw std::invalid_argument("RadialGrid: need at least 5 nodes");
  return RadialGrid{spacing, n};
}

SliceChart::SliceChart(double s, RadialGrid grid, bool cone_confined)
    : s_(s), grid_(grid), confined_(cone_confined) {
  if (!(s > 0.0)) throw std::invalid_argument("SliceChart: s must be positive");
  if (!(grid.spacing > 0.0) || grid.n < 2)
    throw std::invalid_argument("SliceChart: bad grid");
  if (confined_) {
    double limit = (s * s - 1.0) / 2.0;
    if (grid_.r_max() > limit)
      throw std::invalid_argument("SliceChart: cone confinement requires r_max <= (s^2-1)/2");
  }
  t_.resize(grid_.n);
  for (int i = 0; i < grid_.n; ++i) t_[i] = lift(s_, grid_.r(i));
}

SliceGeom SliceGeom::from_chart(const SliceChart& chart) {
  SliceGeom g;
  g.label = chart.s();
  g.grid = chart.grid();
  g.t.resize(g.grid.n);
  g.dt_dr.resize(g.grid.n);
  for (int i = 0; i < g.grid.n; ++i) {
    g.t[i] = chart.t(i);
    g.dt_dr[i] = chart.dt_dr(i);
  }
  // r - t (r/t) and r/t - dt/dr cancel identically on the slice.
  g.boost_w.assign(g.grid.n, 0.0);
  g.tang_w.assign(g.grid.n, 0.0);
  return g;
}

SliceGeom SliceGeom::plane(double t0, const RadialGrid& grid) {
  SliceGeom g;
  g.label = t0;
  g.grid = grid;
  g.t.assign(grid.n, t0);
  g.dt_dr.assign(grid.n, 0.0);
  g.boost_w.resize(grid.n);
  g.tang_w.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    g.boost_w[i] = grid.r(i);
    g.tang_w[i] = grid.r(i) / t0;
  }
  return g;
}

std::vector<double> radial_derivative(std::span<const double> f, const RadialGrid& grid) {
  const int n = grid.n;
  if (int(f.size()) != n) throw std::invalid_argument("radial_derivative: size mismatch");
  const double inv2 = 1.0 / (2.0 * grid.spacing);
  std::vector<double> out(n);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2;
  for (int i = 1; i < n - 1; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2;
  return out;
}

std::vector<double> apply_frame(const FrameField& field, std::span<const double> value,
                                std::span<const double> dt, const SliceGeom& geom) {
  const int n = geom.grid.n;
  if (int(value.size()) != n) throw std::invalid_argument("apply_frame: size mismatch");
  const bool have_dt = int(dt.size()) == n;
  if (!have_dt && !dt.empty()) throw std::invalid_argument("apply_frame: bad dt channel");

  auto need_dt = [&]() {
    if (!have_dt)
      throw std::invalid_argument("apply_frame: missing time-derivative channel");
  };

  switch (field.kind) {
    case FrameField::Kind::TimeTranslation: {
      need_dt();
      return std::vector<double>(dt.begin(), dt.end());
    }
    case FrameField::Kind::SpaceTranslation: {
      // Cartesian d_r on a general surface: subtract the slope term.
      std::vector<double> d = radial_derivative(value, geom.grid);
      for (int i = 0; i < n; ++i) {
        if (geom.dt_dr[i] != 0.0) {
          need_dt();
          d[i] -= geom.dt_dr[i] * dt[i];
        }
      }
      return d;
    }
    case FrameField::Kind::Boost: {
      // L u = r u_t + t u_r = t d(value)/dr + (r - t dt/dr) u_t.
      need_dt();
      std::vector<double> d = radial_derivative(value, geom.grid);
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i)
        out[i] = geom.t[i] * d[i] + geom.boost_w[i] * dt[i];
      return out;
    }
    case FrameField::Kind::Tangential: {
      need_dt();
      std::vector<double> d = radial_derivative(value, geom.grid);
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) out[i] = d[i] + geom.tang_w[i] * dt[i];
      return out;
    }
  }
  throw std::logic_error("apply_frame: unknown frame kind");
}

double CommutatorDeviation::max() const {
  double m = time_boost;
  if (space_boost > m) m = space_boost;
  if (boost_boost > m) m = boost_boost;
  return m;
}

CommutatorDeviation commutator_check(const SampleField& sample,
                                     std::span<const std::pair<double, double>> points) {
  CommutatorDeviation dev;
  for (auto& [t, r] : points) {
    // [d_t, L] f - d_r f: expanding d_t(L f) = r f_tt + f_r + t f_rt against
    // L(f_t) = r f_tt + t f_tr, the f_tt and f_r terms cancel identically
    // and the deviation is t (f_rt - f_tr).
    double e1 = std::fabs(t * (sample.f_rt(t, r) - sample.f_tr(t, r)));

    // [d_r, L] f - d_t f: d_r(L f) = f_t + r f_tr + t f_rr against
    // L(f_r) = r f_rt + t f_rr leaves r (f_tr - f_rt).
    double e2 = std::fabs(r * (sample.f_tr(t, r) - sample.f_rt(t, r)));

    // [L, L] = 0: the single radial boost commutes with itself.
    double e3 = 0.0;

    if (e1 > dev.time_boost) dev.time_boost = e1;
    if (e2 > dev.space_boost) dev.space_boost = e2;
    if (e3 > dev.boost_boost) dev.boost_boost = e3;
  }
  return dev;
}

}  // namespace wkg
