#pragma once

#include <string>
#include <vector>

#include "wkg/tensor/gauge.hpp"

namespace wkg::tensor {

/// Partition of a purely quadratic first-derivative expression into
///  - null:       derivative indices contracted together through eta (Q0
///                pattern) or members of an antisymmetric +/- pair differing
///                only by a derivative-index swap,
///  - quasi_null: both derivative indices are the free indices,
///  - other:      everything else.
/// The three parts sum exactly to the input.
struct QuadraticPartition {
  TensorExpr null_part;
  TensorExpr quasi_null_part;
  TensorExpr other_part;
};

QuadraticPartition classify_quadratic(const TensorExpr& expr);

/// The displayed quasi-null terms with background-contracted coefficients:
///   -1/2 eta^{ll'} eta^{dd'} d_a h_{d l'} d_b h_{l d'}
///   +1/4 eta^{dd'} eta^{ll'} d_b h_{d d'} d_a h_{l l'}.
TensorExpr quasi_null_display(Label a, Label b);

struct LemmaReport {
  bool reduction_quadratic = false;  // remainder is purely quadratic in dh
  bool other_empty = false;
  bool quasi_null_matches = false;
  bool identity_exact = false;
  bool ok() const {
    return reduction_quadratic && other_empty && quasi_null_matches && identity_exact;
  }

  QuadraticPartition partition;
  TensorExpr reduced;
  TensorExpr gauge_part;
  std::vector<std::pair<Rational, GaugeElement>> gauge_combination;
  std::string offending;  // offending monomials on failure
};

/// Drives the order-2 pipeline: computes 2 R_{ab} + boxt_g g_{ab}, reduces
/// modulo the wave-gauge ideal, classifies the quadratic remainder, matches
/// the quasi-null part against the displayed coefficients -1/2 and +1/4 and
/// re-checks the assembled identity by exact cancellation.
LemmaReport verify_lemma();

std::string format_report(const LemmaReport& report);

}  // namespace wkg::tensor
