#include "wkg/tensor/metric.hpp"

#include <stdexcept>

namespace wkg::tensor {

namespace {

Label fresh(int k) { return kDummyBase + 5000 + k; }

}  // namespace

PerturbativeMetric::PerturbativeMetric(int order) : order_(order) {
  if (order < 1 || order > 2)
    throw std::invalid_argument("PerturbativeMetric: supported orders are 1 and 2");
}

TensorExpr PerturbativeMetric::inverse(Label a, Label b) const {
  // eta^{ab}
  TensorExpr e = TensorExpr::eta_up(a, b);
  // - h^{ab} = - eta^{ac} eta^{bd} h_{cd}
  Label c = fresh(0), d = fresh(1);
  e = e - TensorExpr::eta_up(a, c) * TensorExpr::eta_up(b, d) * TensorExpr::h(c, d);
  if (order_ >= 2) {
    // + h^{ac} h_c^b = eta^{ap} eta^{cq} h_{pq} eta^{br} h_{cr}
    Label p = fresh(2), q = fresh(3), r = fresh(4), cc = fresh(5);
    e = e + TensorExpr::eta_up(a, p) * TensorExpr::eta_up(cc, q) * TensorExpr::h(p, q) *
                TensorExpr::eta_up(b, r) * TensorExpr::h(cc, r);
  }
  return e;
}

TensorExpr PerturbativeMetric::metric_derivative(Label c, Label a, Label b) {
  return TensorExpr::h(a, b, {c});
}

TensorExpr christoffel(const PerturbativeMetric& metric, int order, Label lam, Label a,
                       Label b) {
  if (order > metric.order())
    throw std::invalid_argument("christoffel: order exceeds metric truncation order");
  Label lp = fresh(10);
  TensorExpr bracket = PerturbativeMetric::metric_derivative(a, b, lp) +
                       PerturbativeMetric::metric_derivative(b, a, lp) -
                       PerturbativeMetric::metric_derivative(lp, a, b);
  TensorExpr g_up = metric.inverse(lam, lp);
  return (g_up * bracket * Rational(1, 2)).truncate(order);
}

TensorExpr ricci(const PerturbativeMetric& metric, int order, Label a, Label b) {
  if (order > metric.order())
    throw std::invalid_argument("ricci: order exceeds metric truncation order");
  Label lam = fresh(20), del = fresh(21);

  TensorExpr term1 = christoffel(metric, order, lam, a, b).derivative(lam);
  TensorExpr term2 = christoffel(metric, order, lam, b, lam).derivative(a);
  TensorExpr term3 =
      christoffel(metric, order, lam, a, b) * christoffel(metric, order, del, lam, del);
  TensorExpr term4 =
      christoffel(metric, order, lam, a, del) * christoffel(metric, order, del, b, lam);

  return (term1 - term2 + term3 - term4).truncate(order);
}

TensorExpr reduced_box_of_metric(const PerturbativeMetric& metric, int order, Label a,
                                 Label b) {
  Label c = fresh(30), d = fresh(31);
  // d_c d_d h_{ab} is already first order, so the inverse metric only needs
  // to be carried to order-1.
  TensorExpr ddh = TensorExpr::h(a, b, {c, d});
  return (metric.inverse(c, d) * ddh).truncate(order);
}

}  // namespace wkg::tensor
