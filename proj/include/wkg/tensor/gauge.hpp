#pragma once

#include <string>
#include <vector>

#include "wkg/tensor/metric.hpp"

namespace wkg::tensor {

/// One admissible multiple of a wave-gauge generator: a coefficient
/// expression (possibly the constant 1) times the generator G_g or its first
/// derivative d_d G_g, with every open slot either carrying one of the target
/// free indices or contracted away through the background metric.
struct GaugeElement {
  std::string description;
  TensorExpr coefficient;
  TensorExpr generator;
  TensorExpr expanded;  // canon(coefficient * generator), truncated
};

/// The wave-gauge ideal around Minkowski, generated by
///   G_g = 2 g^{ab} d_b g_{ag} - g^{ab} d_g g_{ab}
/// and its first derivatives, truncated to the working order.
class GaugeIdeal {
 public:
  GaugeIdeal(const PerturbativeMetric& metric, int order);

  int order() const { return order_; }

  /// G_g, truncated to the working order.
  TensorExpr generator(Label g) const;
  /// d_d G_g, truncated to the working order.
  TensorExpr generator_derivative(Label d, Label g) const;

  /// Deterministic enumeration of gauge multiples whose free indices are
  /// exactly `free` (one or two labels) and whose derivative count is 1 or 2.
  /// Duplicates and zero expansions are dropped.
  std::vector<GaugeElement> elements(const std::vector<Label>& free) const;

 private:
  PerturbativeMetric metric_;
  int order_;
};

struct GaugeReduction {
  TensorExpr reduced;
  TensorExpr gauge_part;
  /// The exact combination: gauge_part = sum of weight * element.expanded.
  std::vector<std::pair<Rational, GaugeElement>> combination;
};

/// Split `expr = reduced + gauge_part` exactly, where gauge_part lies in the
/// span of the ideal's elements and reduced carries no monomial eliminable
/// under the fixed elimination order (second-derivative structures first,
/// then derivative-of-trace structures, then within-factor divergence
/// structures). Deterministic; exact rational arithmetic throughout.
GaugeReduction reduce_mod_gauge(const TensorExpr& expr, const GaugeIdeal& ideal);

}  // namespace wkg::tensor
