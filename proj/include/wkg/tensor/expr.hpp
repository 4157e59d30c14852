#pragma once

#include <map>
#include <string>
#include <vector>

#include "wkg/rational.hpp"

namespace wkg::tensor {

/// Abstract index label. Small non-negative values are named free indices,
/// values >= kDummyBase are contraction dummies (renamed on canonicalization).
using Label = int;

constexpr Label kAlpha = 0;
constexpr Label kBeta = 1;
constexpr Label kGamma = 2;
constexpr Label kDelta = 3;
constexpr Label kEpsilon = 4;
constexpr Label kZeta = 5;
constexpr Label kDummyBase = 100;

std::string label_name(Label l);

/// One multiplicative factor of a monomial. Two kinds:
///  - EtaUp: the constant inverse background metric with two upper indices,
///    symmetric, never differentiated.
///  - H: the metric perturbation with two lower indices and a (possibly
///    empty) multiset of lower derivative indices; symmetric in (a, b).
/// Raised perturbations are always written out as eta * eta * h, so every
/// contraction pairs one upper slot with one lower slot.
struct Factor {
  enum class Kind { EtaUp, H };
  Kind kind = Kind::H;
  Label a = 0;
  Label b = 0;
  std::vector<Label> derivs;  // sorted

  static Factor eta_up(Label a, Label b) { return Factor{Kind::EtaUp, a, b, {}}; }
  static Factor h(Label a, Label b, std::vector<Label> d = {}) {
    return Factor{Kind::H, a, b, std::move(d)};
  }
};

struct Monomial {
  Rational coeff;
  std::vector<Factor> factors;

  /// Number of H factors = perturbation order of the monomial.
  int degree() const;
  /// Total number of derivative applications across all factors.
  int deriv_count() const;
};

/// Exact indexed polynomial in the formal perturbation h and the background
/// inverse metric. Always held in canonical form: dummies renamed by a fixed
/// scheme, factors sorted, like monomials merged. Equality of canonical
/// forms is expression equality.
class TensorExpr {
 public:
  TensorExpr() = default;

  static TensorExpr zero() { return TensorExpr(); }
  static TensorExpr constant(const Rational& c);
  static TensorExpr eta_up(Label a, Label b);
  static TensorExpr h(Label a, Label b, std::vector<Label> derivs = {});
  static TensorExpr from_monomials(std::vector<Monomial> monos);

  bool is_zero() const { return monos_.empty(); }
  const std::vector<Monomial>& monomials() const { return monos_; }
  /// Labels occurring exactly once (identical for every monomial).
  const std::vector<Label>& free_labels() const { return free_; }

  TensorExpr operator+(const TensorExpr& o) const;
  TensorExpr operator-(const TensorExpr& o) const;
  TensorExpr operator*(const TensorExpr& o) const;  // dummy-safe product
  TensorExpr operator*(const Rational& c) const;
  TensorExpr operator-() const;

  /// Leibniz derivative with respect to the coordinate labelled `l`.
  /// If `l` already occurs free in the expression the result contracts it.
  TensorExpr derivative(Label l) const;

  /// Drop monomials with degree() > max_degree.
  TensorExpr truncate(int max_degree) const;

  /// Swap two free labels (used to build symmetrizations).
  TensorExpr swap_free(Label x, Label y) const;

  friend bool operator==(const TensorExpr& a, const TensorExpr& b);
  friend bool operator!=(const TensorExpr& a, const TensorExpr& b) { return !(a == b); }

  std::string str() const;

 private:
  explicit TensorExpr(std::vector<Monomial> m) : monos_(std::move(m)) { canonicalize(); }
  void canonicalize();

  std::vector<Monomial> monos_;
  std::vector<Label> free_;
};

/// Polynomial in the formal expansion parameter: coefficient per h-degree.
using DegreePoly = std::vector<Rational>;

/// Deterministic pseudo-random exact-rational component values for h and its
/// derivatives, symmetric in the index pair and in the derivative multiset.
/// Used for numeric spot checks with the index alphabet expanded to {0,1,2,3}.
class ComponentSampler {
 public:
  explicit ComponentSampler(std::uint64_t seed) : seed_(seed) {}
  Rational h_component(const std::vector<int>& derivs, int i, int j);

 private:
  std::uint64_t seed_;
  std::map<std::string, Rational> cache_;
};

/// Evaluate with every free label fixed to a concrete index value, summing
/// dummies over {0,1,2,3} with eta = diag(-1,1,1,1). Exact arithmetic;
/// returns coefficients split by perturbation degree.
DegreePoly eval_components(const TensorExpr& e, const std::map<Label, int>& free_values,
                           ComponentSampler& sampler);

}  // namespace wkg::tensor
