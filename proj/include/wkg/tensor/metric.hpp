#pragma once

#include "wkg/tensor/expr.hpp"

namespace wkg::tensor {

/// Perturbative expansion of the metric around Minkowski,
/// g_{ab} = eta_{ab} + h_{ab}, truncated at a fixed order in h.
/// Supported truncation orders: 1 and 2.
class PerturbativeMetric {
 public:
  explicit PerturbativeMetric(int order);

  int order() const { return order_; }

  /// Inverse metric g^{ab} = eta^{ab} - h^{ab} + h^{ac} h_c^b - O(h^3),
  /// truncated to `order` (indices raised with eta throughout).
  TensorExpr inverse(Label a, Label b) const;

  /// d g_{ab} / d x^c = d h_{ab} (the background is constant).
  static TensorExpr metric_derivative(Label c, Label a, Label b);

 private:
  int order_;
};

/// Christoffel symbols of the perturbed metric,
///   Gamma^lam_{ab} = 1/2 g^{lam lam'} (d_a g_{b lam'} + d_b g_{a lam'} - d_lam' g_{ab}),
/// expanded and truncated at `order` in h. The upper index is `lam`.
TensorExpr christoffel(const PerturbativeMetric& metric, int order, Label lam, Label a,
                       Label b);

/// Ricci tensor
///   R_{ab} = d_lam Gamma^lam_{ab} - d_a Gamma^lam_{b lam}
///            + Gamma^lam_{ab} Gamma^del_{lam del} - Gamma^lam_{a del} Gamma^del_{b lam},
/// expanded and truncated at `order` in h. Canonical and symmetric in (a, b).
TensorExpr ricci(const PerturbativeMetric& metric, int order, Label a, Label b);

/// Reduced wave operator applied to the metric:
///   boxt_g g_{ab} = g^{cd} d_c d_d h_{ab},
/// truncated so the total expression order is <= `order`.
TensorExpr reduced_box_of_metric(const PerturbativeMetric& metric, int order, Label a,
                                 Label b);

}  // namespace wkg::tensor
