#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace wkg {

/// Raised when a point lies on or outside the light cone t = r.
class OutsideConeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a computation aborts at runtime (non-finite fields, CFL
/// violations mid-run, diverging members of a sweep).
class RuntimeAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minkowski time of the hyperboloid H_s at radius r: t = sqrt(s^2 + r^2).
double lift(double s, double r);

/// Hyperboloidal time through (t, r): s = sqrt(t^2 - r^2). Requires t > r.
double project(double t, double r);

/// Uniform radial grid, r_i = i * spacing.
struct RadialGrid {
  double spacing = 0.0;
  int n = 0;

  static RadialGrid uniform(double spacing, int n);

  double r(int i) const { return spacing * i; }
  double r_max() const { return spacing * (n - 1); }
};

/// A hyperboloidal slice H_s restricted to a radial grid.
class SliceChart {
 public:
  SliceChart(double s, RadialGrid grid, bool cone_confined = false);

  double s() const { return s_; }
  const RadialGrid& grid() const { return grid_; }
  bool cone_confined() const { return confined_; }

  double t(int i) const { return t_[i]; }
  /// Slope of Minkowski time along the slice, dt/dr = r / t.
  double dt_dr(int i) const { return grid_.r(i) / t_[i]; }

 private:
  double s_;
  RadialGrid grid_;
  bool confined_;
  std::vector<double> t_;
};

/// Geometry of the surface a state lives on, shared by hyperboloidal slices
/// (t varies along the surface) and Cartesian time planes (t constant).
/// boost_w = r - t dt/dr and tang_w = r/t - dt/dr are stored in their
/// algebraically simplified form (boosts are tangent to hyperboloidal
/// slices, so both weights vanish identically there).
struct SliceGeom {
  double label = 0.0;  // s for slices, t for planes
  RadialGrid grid;
  std::vector<double> t;       // Minkowski time per node
  std::vector<double> dt_dr;   // dt along the surface per node
  std::vector<double> boost_w;
  std::vector<double> tang_w;

  static SliceGeom from_chart(const SliceChart& chart);
  static SliceGeom plane(double t0, const RadialGrid& grid);
};

/// Frame vector fields of the foliation. In radial symmetry the three
/// boosts collapse to the single radial boost L = r d_t + t d_r and the
/// rotation class acts as zero; `axis` is kept for interface parity.
struct FrameField {
  enum class Kind { TimeTranslation, SpaceTranslation, Boost, Tangential };
  Kind kind = Kind::Boost;
  int axis = 1;
};

/// Centered first derivative on the grid, one-sided second order at edges.
std::vector<double> radial_derivative(std::span<const double> f, const RadialGrid& grid);

/// Apply a frame field to a field given by (value, time-derivative) on a
/// surface. The time-derivative channel is required for every kind except
/// the plain spatial translation on a time plane; pass an empty span to
/// signal a missing channel.
std::vector<double> apply_frame(const FrameField& field, std::span<const double> value,
                                std::span<const double> dt, const SliceGeom& geom);

/// Sample field with derivative channels for commutator checks. The two
/// mixed channels are distinct on purpose: f_tr is the r-derivative of f_t
/// and f_rt the t-derivative of f_r. Exact closed-form samples set both to
/// the same function; discretized samples generally do not, and the
/// commutator deviation measures exactly that mismatch.
struct SampleField {
  std::function<double(double, double)> f, f_t, f_r, f_tt, f_tr, f_rt, f_rr;
};

struct CommutatorDeviation {
  double time_boost = 0.0;   // [d_t, L] - d_r
  double space_boost = 0.0;  // [d_r, L] - d_t
  double boost_boost = 0.0;  // [L, L]
  double max() const;
};

/// Evaluate the frame commutator identities on a set of (t, r) points.
CommutatorDeviation commutator_check(const SampleField& sample,
                                     std::span<const std::pair<double, double>> points);

}  // namespace wkg
