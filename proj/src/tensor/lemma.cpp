#include "wkg/tensor/lemma.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wkg::tensor {

namespace {

struct QuadShape {
  int h1 = -1, h2 = -1;  // positions of the two H factors
  Label d1 = 0, d2 = 0;  // their derivative labels
};

QuadShape quad_shape(const Monomial& m) {
  QuadShape s;
  for (int i = 0; i < int(m.factors.size()); ++i) {
    const Factor& f = m.factors[i];
    if (f.kind != Factor::Kind::H) continue;
    if (f.derivs.size() != 1)
      throw std::invalid_argument(
          "classify_quadratic: monomial is not quadratic in first derivatives: " +
          std::to_string(f.derivs.size()) + " derivatives on one factor");
    if (s.h1 < 0) {
      s.h1 = i;
      s.d1 = f.derivs[0];
    } else if (s.h2 < 0) {
      s.h2 = i;
      s.d2 = f.derivs[0];
    } else {
      throw std::invalid_argument("classify_quadratic: monomial has more than two h factors");
    }
  }
  if (s.h2 < 0)
    throw std::invalid_argument("classify_quadratic: monomial is not quadratic in h");
  return s;
}

bool eta_pairs(const Monomial& m, Label x, Label y) {
  for (const auto& f : m.factors) {
    if (f.kind != Factor::Kind::EtaUp) continue;
    if ((f.a == x && f.b == y) || (f.a == y && f.b == x)) return true;
  }
  return false;
}

// The monomial with the two derivative indices swapped between the factors.
Monomial swap_derivatives(const Monomial& m) {
  QuadShape s = quad_shape(m);
  Monomial out = m;
  out.factors[s.h1].derivs = {s.d2};
  out.factors[s.h2].derivs = {s.d1};
  return out;
}

std::string monomial_str(const Monomial& m) {
  return TensorExpr::from_monomials({m}).str();
}

}  // namespace

QuadraticPartition classify_quadratic(const TensorExpr& expr) {
  QuadraticPartition part;
  part.null_part = TensorExpr::zero();
  part.quasi_null_part = TensorExpr::zero();
  part.other_part = TensorExpr::zero();
  if (expr.is_zero()) return part;

  std::vector<Label> free = expr.free_labels();

  std::vector<Monomial> null_m, quasi_m, rest;
  for (const auto& m : expr.monomials()) {
    QuadShape s = quad_shape(m);
    if (eta_pairs(m, s.d1, s.d2)) {
      null_m.push_back(m);
    } else if (free.size() == 2 &&
               ((s.d1 == free[0] && s.d2 == free[1]) ||
                (s.d1 == free[1] && s.d2 == free[0]))) {
      quasi_m.push_back(m);
    } else {
      rest.push_back(m);
    }
  }

  // Antisymmetric-pair matching among the remaining monomials: canonical
  // keys in deterministic order, greedy absorption of +/- amounts.
  std::map<std::string, Rational> remaining;
  std::map<std::string, Monomial> proto;
  for (const auto& m : rest) {
    std::string k = monomial_str(Monomial{Rational(1), m.factors});
    remaining[k] += m.coeff;
    proto.emplace(k, Monomial{Rational(1), m.factors});
  }

  for (auto& [key, coeff] : remaining) {
    if (coeff.is_zero()) continue;
    Monomial swapped = swap_derivatives(proto.at(key));
    std::string skey = monomial_str(swapped);
    if (skey == key) continue;  // symmetric under the swap, cannot pair
    auto it = remaining.find(skey);
    if (it == remaining.end() || it->second.is_zero()) continue;
    Rational a = coeff, b = it->second;
    // Need opposite signs to form a_d u b_l v - a_l u b_d v.
    bool opposite = (Rational(0) < a) != (Rational(0) < b);
    if (!opposite) continue;
    Rational amount = a;
    Rational babs = Rational(0) < b ? b : -b;
    Rational aabs = Rational(0) < a ? a : -a;
    if (babs < aabs) amount = Rational(0) < a ? babs : -babs;
    // Move amount*key and -amount*skey into the null class.
    null_m.push_back(Monomial{amount, proto.at(key).factors});
    null_m.push_back(Monomial{-amount, proto.at(skey).factors});
    coeff -= amount;
    it->second += amount;
  }
  std::vector<Monomial> other_m;
  for (auto& [key, coeff] : remaining) {
    if (coeff.is_zero()) continue;
    Monomial m = proto.at(key);
    m.coeff = coeff;
    other_m.push_back(m);
  }

  part.null_part = TensorExpr::from_monomials(null_m);
  part.quasi_null_part = TensorExpr::from_monomials(quasi_m);
  part.other_part = TensorExpr::from_monomials(other_m);
  return part;
}

TensorExpr quasi_null_display(Label a, Label b) {
  Label l = kDummyBase + 8000, lp = kDummyBase + 8001;
  Label d = kDummyBase + 8002, dp = kDummyBase + 8003;
  TensorExpr first = TensorExpr::eta_up(l, lp) * TensorExpr::eta_up(d, dp) *
                     TensorExpr::h(d, lp, {a}) * TensorExpr::h(l, dp, {b}) *
                     Rational(-1, 2);
  TensorExpr second = TensorExpr::eta_up(d, dp) * TensorExpr::eta_up(l, lp) *
                      TensorExpr::h(d, dp, {b}) * TensorExpr::h(l, lp, {a}) *
                      Rational(1, 4);
  return first + second;
}

LemmaReport verify_lemma() {
  LemmaReport rep;
  const Label a = kAlpha, b = kBeta;

  PerturbativeMetric metric(2);
  TensorExpr two_ricci = ricci(metric, 2, a, b) * Rational(2);
  TensorExpr boxed = reduced_box_of_metric(metric, 2, a, b);
  TensorExpr d_expr = two_ricci + boxed;

  GaugeIdeal ideal(metric, 2);
  GaugeReduction red = reduce_mod_gauge(d_expr, ideal);
  rep.reduced = red.reduced;
  rep.gauge_part = red.gauge_part;
  rep.gauge_combination = red.combination;

  // The remainder must be purely quadratic in first derivatives.
  rep.reduction_quadratic = true;
  std::ostringstream bad;
  for (const auto& m : red.reduced.monomials()) {
    bool quad = m.degree() == 2;
    if (quad) {
      for (const auto& f : m.factors)
        if (f.kind == Factor::Kind::H && f.derivs.size() != 1) quad = false;
    }
    if (!quad) {
      rep.reduction_quadratic = false;
      bad << "  non-quadratic remainder: " << monomial_str(m) << "\n";
    }
  }

  if (rep.reduction_quadratic) {
    rep.partition = classify_quadratic(red.reduced);
    rep.other_empty = rep.partition.other_part.is_zero();
    if (!rep.other_empty)
      bad << "  unclassified terms: " << rep.partition.other_part.str() << "\n";
    rep.quasi_null_matches = rep.partition.quasi_null_part == quasi_null_display(a, b);
    if (!rep.quasi_null_matches)
      bad << "  quasi-null part: " << rep.partition.quasi_null_part.str() << "\n";
  }

  // Re-assemble the identity from scratch: 2R_{ab} = -boxt_g g_{ab} +
  // remainder + gauge multiples, as an exact cancellation of canonical forms.
  TensorExpr gauge_rebuilt = TensorExpr::zero();
  for (const auto& [w, el] : red.combination)
    gauge_rebuilt = gauge_rebuilt + (el.coefficient * el.generator).truncate(2) * w;
  TensorExpr residue = ricci(metric, 2, a, b) * Rational(2) + boxed - red.reduced - gauge_rebuilt;
  rep.identity_exact = residue.is_zero();
  if (!rep.identity_exact) bad << "  identity residue: " << residue.str() << "\n";

  rep.offending = bad.str();
  return rep;
}

std::string format_report(const LemmaReport& rep) {
  std::ostringstream os;
  os << "wave-gauge Ricci decomposition, order 2\n";
  os << "  2 R_ab = -boxt_g g_ab + (null) + (quasi-null) + (gauge)\n\n";

  auto count = [](const TensorExpr& e) { return e.monomials().size(); };

  os << "null class: " << count(rep.partition.null_part) << " monomials\n";
  for (const auto& m : rep.partition.null_part.monomials())
    os << "    " << TensorExpr::from_monomials({m}).str() << "\n";
  os << "quasi-null class: " << count(rep.partition.quasi_null_part) << " monomials"
     << (rep.quasi_null_matches ? "  [matches display: -1/2, +1/4]" : "  [MISMATCH]")
     << "\n";
  for (const auto& m : rep.partition.quasi_null_part.monomials())
    os << "    " << TensorExpr::from_monomials({m}).str() << "\n";
  os << "other class: " << count(rep.partition.other_part) << " monomials"
     << (rep.other_empty ? "  [empty]" : "  [NONEMPTY]") << "\n";
  for (const auto& m : rep.partition.other_part.monomials())
    os << "    " << TensorExpr::from_monomials({m}).str() << "\n";

  os << "gauge combination: " << rep.gauge_combination.size() << " generator multiples\n";
  for (const auto& [w, el] : rep.gauge_combination)
    os << "    (" << w << ") * " << el.description << "\n";

  os << "identity cancellation: " << (rep.identity_exact ? "exact" : "FAILED") << "\n";
  os << "verdict: " << (rep.ok() ? "verified" : "FAILED") << "\n";
  if (!rep.offending.empty()) os << "offending monomials:\n" << rep.offending;
  return os.str();
}

}  // namespace wkg::tensor
