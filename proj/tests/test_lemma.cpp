#include <random>

#include "doctest.h"
#include "wkg/tensor/lemma.hpp"

using namespace wkg;
using namespace wkg::tensor;

namespace {

TensorExpr q0_pair(Label a, Label b) {
  // eta^{dd'} eta^{ll'} d_d h_{a l'} d_d' h_{b l}: the contracted-derivative
  // null pattern.
  Label d = kDummyBase + 500, dp = kDummyBase + 501;
  Label l = kDummyBase + 502, lp = kDummyBase + 503;
  return TensorExpr::eta_up(d, dp) * TensorExpr::eta_up(l, lp) *
         TensorExpr::h(a, lp, {d}) * TensorExpr::h(b, l, {dp});
}

}  // namespace

TEST_CASE("classification of the three displayed patterns") {
  // Contracted derivative pair -> null.
  QuadraticPartition p1 = classify_quadratic(q0_pair(kAlpha, kBeta));
  CHECK(!p1.null_part.is_zero());
  CHECK(p1.quasi_null_part.is_zero());
  CHECK(p1.other_part.is_zero());

  // Both derivatives on the free indices -> quasi-null.
  QuadraticPartition p2 = classify_quadratic(quasi_null_display(kAlpha, kBeta));
  CHECK(p2.null_part.is_zero());
  CHECK(p2.quasi_null_part == quasi_null_display(kAlpha, kBeta));
  CHECK(p2.other_part.is_zero());

  // Two timelike-style derivatives, neither contracted nor free in the
  // right slots -> other. Realized abstractly: both derivatives contracted
  // against indices of the other factor without a derivative pairing.
  Label c = kDummyBase + 510, cp = kDummyBase + 511, d = kDummyBase + 512,
        dp = kDummyBase + 513;
  TensorExpr other = TensorExpr::eta_up(c, cp) * TensorExpr::eta_up(d, dp) *
                     TensorExpr::h(kAlpha, c, {d}) * TensorExpr::h(kBeta, dp, {cp});
  QuadraticPartition p3 = classify_quadratic(other);
  CHECK(p3.null_part.is_zero());
  CHECK(p3.quasi_null_part.is_zero());
  CHECK(p3.other_part == other);
}

TEST_CASE("antisymmetric pairs classify as null") {
  Label c = kDummyBase + 510, cp = kDummyBase + 511, d = kDummyBase + 512,
        dp = kDummyBase + 513;
  TensorExpr m = TensorExpr::eta_up(c, cp) * TensorExpr::eta_up(d, dp) *
                 TensorExpr::h(kAlpha, c, {d}) * TensorExpr::h(kBeta, dp, {cp});
  // Swap the derivative indices between the factors and subtract.
  TensorExpr swapped = TensorExpr::eta_up(c, cp) * TensorExpr::eta_up(d, dp) *
                       TensorExpr::h(kAlpha, c, {cp}) * TensorExpr::h(kBeta, dp, {d});
  TensorExpr pair = m - swapped;
  QuadraticPartition p = classify_quadratic(pair);
  CHECK(p.other_part.is_zero());
  CHECK(p.quasi_null_part.is_zero());
  CHECK(p.null_part == pair);

  // Unequal weights: only the antisymmetric amount is absorbed.
  TensorExpr lop = m * Rational(3) - swapped * Rational(2);
  QuadraticPartition q = classify_quadratic(lop);
  CHECK(q.null_part + q.quasi_null_part + q.other_part == lop);
  CHECK(q.other_part == m);
}

TEST_CASE("partition sums exactly to the input") {
  PerturbativeMetric metric(2);
  GaugeIdeal ideal(metric, 2);
  TensorExpr d_expr = ricci(metric, 2, kAlpha, kBeta) * Rational(2) +
                      reduced_box_of_metric(metric, 2, kAlpha, kBeta);
  GaugeReduction red = reduce_mod_gauge(d_expr, ideal);
  QuadraticPartition p = classify_quadratic(red.reduced);
  CHECK(p.null_part + p.quasi_null_part + p.other_part == red.reduced);
}

TEST_CASE("partition property on random quadratics") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Monomial> monos;
    int terms = 1 + int(rng() % 4);
    for (int t = 0; t < terms; ++t) {
      Label a = kDummyBase + 10, b = kDummyBase + 11, c = kDummyBase + 12,
            d = kDummyBase + 13;
      std::vector<Label> slots = {a, b, c, d};
      std::shuffle(slots.begin(), slots.end(), rng);
      Monomial m;
      int cf = coeff(rng);
      m.coeff = Rational(cf == 0 ? 1 : cf);
      m.factors.push_back(Factor::eta_up(a, b));
      m.factors.push_back(Factor::eta_up(c, d));
      if (rng() % 2) {
        m.factors.push_back(Factor::h(slots[0], slots[1], {kAlpha}));
        m.factors.push_back(Factor::h(slots[2], slots[3], {kBeta}));
      } else {
        m.factors.push_back(Factor::h(slots[0], slots[1], {slots[2]}));
        m.factors.push_back(Factor::h(kAlpha, kBeta, {slots[3]}));
      }
      monos.push_back(std::move(m));
    }
    TensorExpr e = TensorExpr::from_monomials(monos);
    QuadraticPartition p = classify_quadratic(e);
    CHECK(p.null_part + p.quasi_null_part + p.other_part == e);
  }
}

TEST_CASE("non-quadratic input is rejected") {
  CHECK_THROWS_AS(classify_quadratic(TensorExpr::h(kAlpha, kBeta, {kGamma})),
                  std::invalid_argument);
  Label l = kDummyBase + 520, lp = kDummyBase + 521;
  TensorExpr second = TensorExpr::eta_up(l, lp) * TensorExpr::h(kAlpha, kBeta, {l, lp});
  CHECK_THROWS_AS(classify_quadratic(second), std::invalid_argument);
}

TEST_CASE("lemma verification: all four checks pass") {
  LemmaReport rep = verify_lemma();
  CHECK(rep.reduction_quadratic);
  CHECK(rep.other_empty);
  CHECK(rep.quasi_null_matches);
  CHECK(rep.identity_exact);
  CHECK(rep.ok());
  CHECK(rep.offending.empty());

  // The quasi-null part carries exactly the displayed -1/2 and +1/4.
  CHECK(rep.partition.quasi_null_part == quasi_null_display(kAlpha, kBeta));
  CHECK(rep.partition.quasi_null_part.monomials().size() == 2);
}

TEST_CASE("lemma identity holds under numeric spot evaluation") {
  LemmaReport rep = verify_lemma();
  PerturbativeMetric metric(2);
  TensorExpr lhs = ricci(metric, 2, kAlpha, kBeta) * Rational(2) +
                   reduced_box_of_metric(metric, 2, kAlpha, kBeta);
  TensorExpr rhs = rep.reduced + rep.gauge_part;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    ComponentSampler s1(seed), s2(seed);
    for (int a = 0; a < 4; ++a) {
      DegreePoly pl = eval_components(lhs, {{kAlpha, a}, {kBeta, (a + 1) % 4}}, s1);
      DegreePoly pr = eval_components(rhs, {{kAlpha, a}, {kBeta, (a + 1) % 4}}, s2);
      CHECK(pl == pr);
    }
  }
}

TEST_CASE("report text carries the verdict and classes") {
  LemmaReport rep = verify_lemma();
  std::string text = format_report(rep);
  CHECK(text.find("verdict: verified") != std::string::npos);
  CHECK(text.find("quasi-null class: 2 monomials") != std::string::npos);
  CHECK(text.find("other class: 0 monomials") != std::string::npos);
}
