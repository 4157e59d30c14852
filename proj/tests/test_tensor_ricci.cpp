#include "doctest.h"
#include "wkg/tensor/metric.hpp"

using namespace wkg;
using namespace wkg::tensor;

namespace {

// Independent numeric Ricci oracle: expand the metric series componentwise
// with exact rational values, compute Christoffels and Ricci by explicit
// index sums, and truncate by perturbation degree. Shares nothing with the
// symbolic engine beyond the component sampler.
struct ComponentOracle {
  ComponentSampler sampler;
  explicit ComponentOracle(std::uint64_t seed) : sampler(seed) {}

  static constexpr int D = 4;
  using Poly = std::array<Rational, 4>;  // coefficients by h-degree, truncated

  static Poly scalar(const Rational& r, int degree) {
    Poly p{};
    p[degree] = r;
    return p;
  }
  static Poly add(const Poly& a, const Poly& b) {
    Poly c{};
    for (int i = 0; i < 4; ++i) c[i] = a[i] + b[i];
    return c;
  }
  static Poly mul(const Poly& a, const Poly& b) {
    Poly c{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j + i < 4; ++j) c[i + j] += a[i] * b[j];
    return c;
  }

  Rational eta(int i, int j) const {
    if (i != j) return Rational(0);
    return i == 0 ? Rational(-1) : Rational(1);
  }

  // Value of d_derivs h_{ij}; the sampler is symmetric and consistent.
  Rational h(std::vector<int> derivs, int i, int j) { return sampler.h_component(derivs, i, j); }

  // Inverse metric series g^{ab} = eta - h^ + h^ h^ (indices raised by eta).
  Poly ginv(int a, int b) {
    Poly p = scalar(eta(a, b), 0);
    // -h^{ab}
    p[1] -= eta(a, a) * eta(b, b) * h({}, a, b);
    // + h^{ac} h_c^{b}
    for (int c = 0; c < D; ++c)
      p[2] += eta(a, a) * eta(c, c) * h({}, a, c) * eta(b, b) * h({}, c, b);
    return p;
  }

  Poly dginv(int d, int a, int b) {
    // derivative of the inverse series, truncated at degree 2
    Poly p{};
    p[1] -= eta(a, a) * eta(b, b) * h({d}, a, b);
    for (int c = 0; c < D; ++c)
      p[2] += eta(a, a) * eta(c, c) *
              (h({d}, a, c) * eta(b, b) * h({}, c, b) + h({}, a, c) * eta(b, b) * h({d}, c, b));
    return p;
  }

  Poly christoffel(int lam, int a, int b) {
    Poly p{};
    for (int lp = 0; lp < D; ++lp) {
      Poly bracket{};
      bracket[1] = h({a}, b, lp) + h({b}, a, lp) - h({lp}, a, b);
      p = add(p, mul(ginv(lam, lp), bracket));
    }
    for (auto& c : p) c = c * Rational(1, 2);
    return p;
  }

  Poly dchristoffel(int d, int lam, int a, int b) {
    Poly p{};
    for (int lp = 0; lp < D; ++lp) {
      Poly bracket{}, dbracket{};
      bracket[1] = h({a}, b, lp) + h({b}, a, lp) - h({lp}, a, b);
      dbracket[1] = h({d, a}, b, lp) + h({d, b}, a, lp) - h({d, lp}, a, b);
      p = add(p, add(mul(dginv(d, lam, lp), bracket), mul(ginv(lam, lp), dbracket)));
    }
    for (auto& c : p) c = c * Rational(1, 2);
    return p;
  }

  Poly ricci(int a, int b) {
    Poly p{};
    for (int lam = 0; lam < D; ++lam) {
      p = add(p, dchristoffel(lam, lam, a, b));
      Poly m = dchristoffel(a, lam, b, lam);
      for (auto& c : m) c = -c;
      p = add(p, m);
      for (int del = 0; del < D; ++del) {
        p = add(p, mul(christoffel(lam, a, b), christoffel(del, lam, del)));
        Poly q = mul(christoffel(lam, a, del), christoffel(del, b, lam));
        for (auto& c : q) c = -c;
        p = add(p, q);
      }
    }
    return p;
  }
};

}  // namespace

TEST_CASE("christoffel vanishes for the flat metric") {
  // Order-0 truncation of the expansion is the flat metric: no monomials of
  // degree 0 may appear at any order.
  PerturbativeMetric metric(2);
  TensorExpr g1 = christoffel(metric, 1, kGamma, kAlpha, kBeta);
  TensorExpr g2 = christoffel(metric, 2, kGamma, kAlpha, kBeta);
  for (const auto& m : g2.monomials()) CHECK(m.degree() >= 1);
  CHECK(!g1.is_zero());
  CHECK(g1 == g2.truncate(1));
}

TEST_CASE("christoffel order 1 is the linear substitution") {
  PerturbativeMetric metric(1);
  TensorExpr got = christoffel(metric, 1, kGamma, kAlpha, kBeta);
  Label lp = kDummyBase + 200;
  TensorExpr expect = TensorExpr::eta_up(kGamma, lp) *
                      (TensorExpr::h(kBeta, lp, {kAlpha}) + TensorExpr::h(kAlpha, lp, {kBeta}) -
                       TensorExpr::h(kAlpha, kBeta, {lp})) *
                      Rational(1, 2);
  CHECK(got == expect);
}

TEST_CASE("christoffel order 2 matches the hand expansion of the inverse") {
  // Golden form: -1/2 h^{lam lam'} (d_a h_{b lam'} + d_b h_{a lam'} - d_lam' h_ab).
  PerturbativeMetric metric(2);
  TensorExpr second =
      christoffel(metric, 2, kGamma, kAlpha, kBeta) - christoffel(metric, 1, kGamma, kAlpha, kBeta);
  Label lp = kDummyBase + 200, p = kDummyBase + 201, q = kDummyBase + 202;
  TensorExpr raised = TensorExpr::eta_up(kGamma, p) * TensorExpr::eta_up(lp, q) *
                      TensorExpr::h(p, q);  // h^{gamma lp}
  TensorExpr expect = raised *
                      (TensorExpr::h(kBeta, lp, {kAlpha}) + TensorExpr::h(kAlpha, lp, {kBeta}) -
                       TensorExpr::h(kAlpha, kBeta, {lp})) *
                      Rational(-1, 2);
  CHECK(second == expect);
}

TEST_CASE("ricci is symmetric at both orders") {
  PerturbativeMetric metric(2);
  for (int order : {1, 2}) {
    TensorExpr r = ricci(metric, order, kAlpha, kBeta);
    CHECK(r == r.swap_free(kAlpha, kBeta));
  }
}

TEST_CASE("order overflow is rejected") {
  PerturbativeMetric metric(1);
  CHECK_THROWS_AS(ricci(metric, 2, kAlpha, kBeta), std::invalid_argument);
  CHECK_THROWS_AS(christoffel(metric, 2, kGamma, kAlpha, kBeta), std::invalid_argument);
  CHECK_THROWS_AS(PerturbativeMetric(3), std::invalid_argument);
}

TEST_CASE("inverse metric inverts through the truncation order") {
  // g^{al} g_{lb} = delta, checked componentwise with exact arithmetic on
  // degree-tracked series (degrees 0..2; degree-3 residue is expected).
  PerturbativeMetric metric(2);
  ComponentSampler sampler(41);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      std::array<Rational, 4> acc{};
      for (int l = 0; l < 4; ++l) {
        Label la = 0, lb = 1;
        TensorExpr up = metric.inverse(la, lb);
        DegreePoly upv = eval_components(up, {{la, a}, {lb, l}}, sampler);
        // g_{lb} = eta_{lb} + h_{lb}
        Rational eta_lb = (l == b) ? (l == 0 ? Rational(-1) : Rational(1)) : Rational(0);
        Rational h_lb = sampler.h_component({}, l, b);
        for (std::size_t d = 0; d < 3 && d < upv.size(); ++d) {
          acc[d] += upv[d] * eta_lb;
          if (d + 1 < 4) acc[d + 1] += upv[d] * h_lb;
        }
      }
      CHECK(acc[0] == (a == b ? Rational(1) : Rational(0)));
      CHECK(acc[1] == Rational(0));
      CHECK(acc[2] == Rational(0));
    }
  }
}

TEST_CASE("ricci order 2 matches the exhaustive component oracle") {
  PerturbativeMetric metric(2);
  TensorExpr r2 = ricci(metric, 2, kAlpha, kBeta);

  ComponentOracle oracle(4242);
  ComponentSampler sampler(4242);
  for (int a = 0; a < 4; ++a) {
    for (int b = a; b < 4; ++b) {
      DegreePoly sym = eval_components(r2, {{kAlpha, a}, {kBeta, b}}, sampler);
      ComponentOracle::Poly ref = oracle.ricci(a, b);
      CHECK(sym[0] == Rational(0));
      CHECK(sym[1] == ref[1]);
      CHECK(sym[2] == ref[2]);
    }
  }
}

TEST_CASE("reduced wave operator expands to eta and -h contractions") {
  PerturbativeMetric metric(2);
  TensorExpr box = reduced_box_of_metric(metric, 2, kAlpha, kBeta);
  Label l = kDummyBase + 300, lp = kDummyBase + 301, p = kDummyBase + 302,
        q = kDummyBase + 303;
  TensorExpr expect =
      TensorExpr::eta_up(l, lp) * TensorExpr::h(kAlpha, kBeta, {l, lp}) -
      TensorExpr::eta_up(l, p) * TensorExpr::eta_up(lp, q) * TensorExpr::h(p, q) *
          TensorExpr::h(kAlpha, kBeta, {l, lp});
  CHECK(box == expect);
}
