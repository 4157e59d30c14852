#include "wkg/tensor/gauge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkg::tensor {

namespace {

Label fresh(int k) { return kDummyBase + 7000 + k; }

std::vector<int> monomial_key(const Monomial& m) {
  std::vector<int> k;
  for (const auto& f : m.factors) {
    k.push_back(f.kind == Factor::Kind::EtaUp ? 0 : 1);
    k.push_back(f.a);
    k.push_back(f.b);
    k.push_back(int(f.derivs.size()));
    for (Label d : f.derivs) k.push_back(d);
    k.push_back(-7);
  }
  return k;
}

bool has_traced_derivative_factor(const Monomial& m) {
  for (const auto& f : m.factors) {
    if (f.kind != Factor::Kind::H || f.derivs.empty()) continue;
    for (const auto& e : m.factors) {
      if (e.kind != Factor::Kind::EtaUp) continue;
      if ((e.a == f.a && e.b == f.b) || (e.a == f.b && e.b == f.a)) return true;
    }
  }
  return false;
}

bool eta_pairs_labels(const Monomial& m, Label x, Label y) {
  for (const auto& f : m.factors) {
    if (f.kind != Factor::Kind::EtaUp) continue;
    if ((f.a == x && f.b == y) || (f.a == y && f.b == x)) return true;
  }
  return false;
}

// Shape of a monomial that is quadratic in first derivatives.
struct QuadInfo {
  bool is_quadratic = false;
  int f1 = -1, f2 = -1;
  Label d1 = 0, d2 = 0;
};

QuadInfo quad_info(const Monomial& m) {
  QuadInfo q;
  int nh = 0;
  for (int i = 0; i < int(m.factors.size()); ++i) {
    const Factor& f = m.factors[i];
    if (f.kind != Factor::Kind::H) continue;
    ++nh;
    if (f.derivs.size() != 1) return q;
    if (q.f1 < 0) {
      q.f1 = i;
      q.d1 = f.derivs[0];
    } else {
      q.f2 = i;
      q.d2 = f.derivs[0];
    }
  }
  q.is_quadratic = (nh == 2);
  return q;
}

// Canonical key of the monomial with the two derivative indices swapped
// between its factors (quadratic monomials only).
std::vector<int> swapped_key(const Monomial& m, const QuadInfo& q) {
  Monomial s = m;
  s.coeff = Rational(1);
  s.factors[q.f1].derivs = {q.d2};
  s.factors[q.f2].derivs = {q.d1};
  TensorExpr canon = TensorExpr::from_monomials({s});
  return monomial_key(canon.monomials().at(0));
}

// Column coordinates for the elimination. Quadratic swap-pairs are split
// into a symmetric (eliminable) and an antisymmetric (protected) coordinate;
// Q0-contracted and free-free (quasi-null) monomials are protected outright.
// The pivot order realizes the fixed elimination preference: derivative-of-
// trace structures first, remaining second-derivative structures next, then
// symmetric quadratic content.
constexpr int kProtected = 9;

struct ColumnCoord {
  int rank;
  int part;  // 0 plain, 1 pair-sum, 2 pair-difference
  std::vector<int> key;

  bool operator<(const ColumnCoord& o) const {
    if (rank != o.rank) return rank < o.rank;
    if (key != o.key) return key < o.key;
    return part < o.part;
  }
  bool operator==(const ColumnCoord& o) const {
    return rank == o.rank && part == o.part && key == o.key;
  }
};

}  // namespace

GaugeIdeal::GaugeIdeal(const PerturbativeMetric& metric, int order)
    : metric_(metric), order_(order) {
  if (order < 1 || order > metric.order())
    throw std::invalid_argument("GaugeIdeal: order must be in [1, metric order]");
}

TensorExpr GaugeIdeal::generator(Label g) const {
  Label a = fresh(0), b = fresh(1);
  TensorExpr ginv = metric_.inverse(a, b);
  TensorExpr first = ginv * PerturbativeMetric::metric_derivative(b, a, g) * Rational(2);
  TensorExpr second = ginv * PerturbativeMetric::metric_derivative(g, a, b);
  return (first - second).truncate(order_);
}

TensorExpr GaugeIdeal::generator_derivative(Label d, Label g) const {
  return generator(g).derivative(d).truncate(order_);
}

std::vector<GaugeElement> GaugeIdeal::elements(const std::vector<Label>& free) const {
  if (free.empty() || free.size() > 2)
    throw std::invalid_argument("GaugeIdeal: reduction supports 1 or 2 free indices");

  // Slot model: the generator part contributes its free labels (g, or d and
  // g), an optional coefficient h factor contributes two index slots and at
  // most one derivative slot. Every slot either takes one of the target free
  // labels or is paired with another slot through an inserted eta.
  struct GenSpec {
    bool differentiated;
    std::string name;
  };
  const GenSpec gens[] = {{false, "G"}, {true, "dG"}};

  std::vector<GaugeElement> out;
  std::set<std::string> seen;

  auto add_candidate = [&](const TensorExpr& coeff, const TensorExpr& gen,
                           const std::string& desc) {
    TensorExpr expanded = (coeff * gen).truncate(order_);
    if (expanded.is_zero()) return;
    std::string key = expanded.str();
    if (!seen.insert(key).second) return;
    out.push_back(GaugeElement{desc, coeff, gen, expanded});
  };

  // Enumerate pair partitions of slot list `rest` (indices into labels).
  // For each complete assignment, call emit with the label vector.
  auto enumerate_assignments = [&](int nslots, auto&& emit) {
    // Each slot gets: -1 placeholder; assignment: choose positions of the
    // free labels, then perfect-match the remainder.
    std::vector<int> slot_of_free(free.size());
    std::vector<int> idx(nslots);
    for (int i = 0; i < nslots; ++i) idx[i] = i;

    // choose ordered distinct slots for each free label
    std::function<void(std::size_t, std::vector<int>&)> choose =
        [&](std::size_t fi, std::vector<int>& used) {
          if (fi == free.size()) {
            std::vector<int> rest;
            for (int i = 0; i < nslots; ++i)
              if (std::find(used.begin(), used.end(), i) == used.end()) rest.push_back(i);
            if (rest.size() % 2 != 0) return;
            // perfect matchings of rest
            std::function<void(std::vector<int>&, std::vector<std::pair<int, int>>&)> match =
                [&](std::vector<int>& r, std::vector<std::pair<int, int>>& pairs) {
                  if (r.empty()) {
                    std::vector<Label> labels(nslots, -1);
                    for (std::size_t k = 0; k < free.size(); ++k)
                      labels[slot_of_free[k]] = free[k];
                    // Each pairing gets two distinct labels joined by an eta.
                    int dummy_id = 0;
                    for (auto& [x, y] : pairs) {
                      labels[x] = fresh(40 + dummy_id++);
                      labels[y] = fresh(40 + dummy_id++);
                    }
                    emit(labels, pairs);
                    return;
                  }
                  int first = r[0];
                  for (std::size_t j = 1; j < r.size(); ++j) {
                    std::vector<int> rr;
                    for (std::size_t q = 1; q < r.size(); ++q)
                      if (q != j) rr.push_back(r[q]);
                    pairs.push_back({first, r[j]});
                    match(rr, pairs);
                    pairs.pop_back();
                  }
                };
            std::vector<std::pair<int, int>> pairs;
            match(rest, pairs);
            return;
          }
          for (int s = 0; s < nslots; ++s) {
            if (std::find(used.begin(), used.end(), s) != used.end()) continue;
            used.push_back(s);
            slot_of_free[fi] = s;
            choose(fi + 1, used);
            used.pop_back();
          }
        };
    std::vector<int> used;
    choose(0, used);
  };

  for (const auto& gs : gens) {
    const int gen_slots = gs.differentiated ? 2 : 1;
    // Coefficient shapes: none, plain h, once-differentiated h, and a second
    // generator (the ideal contains generator products too).
    for (int coeff_shape = 0; coeff_shape < 4; ++coeff_shape) {
      const int coeff_slots = coeff_shape == 0 ? 0 : (coeff_shape == 3 ? 1 : (coeff_shape == 1 ? 2 : 3));
      const int nslots = gen_slots + coeff_slots;
      if (nslots < int(free.size())) continue;

      // Total derivative count must stay at 1 or 2; coefficient order must
      // leave room for the generator inside the truncation.
      const int coeff_degree = coeff_shape == 0 ? 0 : 1;
      const int coeff_derivs = coeff_shape == 2 || coeff_shape == 3 ? 1 : 0;
      const int gen_derivs = gs.differentiated ? 1 : 0;
      if (coeff_derivs + gen_derivs + 1 > 2) continue;
      if (coeff_degree >= order_) continue;  // generator itself is order >= 1

      enumerate_assignments(nslots, [&](const std::vector<Label>& labels,
                                        const std::vector<std::pair<int, int>>& pairs) {
        // Slot layout: [gen slots][coeff slots].
        TensorExpr gen = gs.differentiated
                             ? generator_derivative(labels[0], labels[1])
                             : generator(labels[0]);
        // Display names: free labels keep theirs, contraction labels c1, c2...
        std::map<Label, std::string> dn;
        for (Label f : free) dn[f] = label_name(f);
        int cn = 0;
        for (const auto& [x, y] : pairs) {
          dn[labels[x]] = "c" + std::to_string(++cn);
          dn[labels[y]] = "c" + std::to_string(++cn);
        }
        TensorExpr coeff = TensorExpr::constant(Rational(1));
        std::ostringstream desc;
        for (const auto& [x, y] : pairs) {
          coeff = coeff * TensorExpr::eta_up(labels[x], labels[y]);
          desc << "eta^{" << dn[labels[x]] << " " << dn[labels[y]] << "} ";
        }
        if (coeff_shape == 1 || coeff_shape == 2) {
          Label i = labels[gen_slots + 0], j = labels[gen_slots + 1];
          if (coeff_shape == 1) {
            coeff = coeff * TensorExpr::h(i, j);
            desc << "h_{" << dn[i] << " " << dn[j] << "} ";
          } else {
            Label d = labels[gen_slots + 2];
            coeff = coeff * TensorExpr::h(i, j, {d});
            desc << "d_{" << dn[d] << "}h_{" << dn[i] << " " << dn[j] << "} ";
          }
        } else if (coeff_shape == 3) {
          Label g2 = labels[gen_slots + 0];
          coeff = coeff * generator(g2);
          desc << "G_{" << dn[g2] << "} ";
        }
        if (gs.differentiated)
          desc << "d_{" << dn[labels[0]] << "}G_{" << dn[labels[1]] << "}";
        else
          desc << "G_{" << dn[labels[0]] << "}";
        // Coefficient degree caps the generator truncation inside expanded;
        // truncate() in add_candidate enforces the total order.
        add_candidate(coeff, gen, desc.str());
      });
    }
  }
  return out;
}

GaugeReduction reduce_mod_gauge(const TensorExpr& expr, const GaugeIdeal& ideal) {
  GaugeReduction res;
  if (expr.is_zero()) {
    res.reduced = TensorExpr::zero();
    res.gauge_part = TensorExpr::zero();
    return res;
  }

  std::vector<GaugeElement> cands = ideal.elements(expr.free_labels());
  const std::vector<Label>& free = expr.free_labels();

  // Map one monomial to its column coordinates (one or two weighted columns).
  auto coords = [&](const Monomial& m) {
    std::vector<std::pair<ColumnCoord, Rational>> out;
    auto key = monomial_key(m);
    bool second_deriv = false;
    for (const auto& f : m.factors)
      if (f.kind == Factor::Kind::H && f.derivs.size() >= 2) second_deriv = true;
    if (second_deriv) {
      int rank = has_traced_derivative_factor(m) ? 0 : 1;
      out.push_back({ColumnCoord{rank, 0, key}, m.coeff});
      return out;
    }
    QuadInfo q = quad_info(m);
    if (q.is_quadratic) {
      bool q0 = eta_pairs_labels(m, q.d1, q.d2);
      bool quasi = free.size() == 2 && ((q.d1 == free[0] && q.d2 == free[1]) ||
                                        (q.d1 == free[1] && q.d2 == free[0]));
      if (q0 || quasi) {
        out.push_back({ColumnCoord{kProtected, 0, key}, m.coeff});
        return out;
      }
      auto skey = swapped_key(m, q);
      if (skey == key) {
        out.push_back({ColumnCoord{2, 0, key}, m.coeff});
        return out;
      }
      // Orient the pair by its lexicographically smaller key.
      bool is_rep = key < skey;
      const auto& rep = is_rep ? key : skey;
      Rational half = m.coeff * Rational(1, 2);
      out.push_back({ColumnCoord{2, 1, rep}, half});
      out.push_back({ColumnCoord{kProtected, 2, rep}, is_rep ? half : -half});
      return out;
    }
    out.push_back({ColumnCoord{2, 0, key}, m.coeff});
    return out;
  };

  std::map<ColumnCoord, int> col_index;
  auto intern = [&](const ColumnCoord& c) {
    auto it = col_index.find(c);
    if (it != col_index.end()) return it->second;
    int id = int(col_index.size());
    col_index.emplace(c, id);
    return id;
  };

  using Row = std::map<int, Rational>;  // column position -> coefficient
  auto to_row_raw = [&](const TensorExpr& e) {
    std::map<ColumnCoord, Rational> acc;
    for (const auto& m : e.monomials())
      for (auto& [c, v] : coords(m)) acc[c] += v;
    return acc;
  };

  // Intern all columns first so positions follow the global pivot order.
  std::vector<std::map<ColumnCoord, Rational>> cand_raw;
  for (const auto& c : cands) cand_raw.push_back(to_row_raw(c.expanded));
  auto expr_raw = to_row_raw(expr);
  for (const auto& [c, v] : expr_raw) intern(c);
  for (const auto& r : cand_raw)
    for (const auto& [c, v] : r) intern(c);

  std::vector<ColumnCoord> cols(col_index.size(), ColumnCoord{0, 0, {}});
  for (const auto& [c, id] : col_index) cols[id] = c;
  std::vector<int> order(cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return cols[x] < cols[y]; });
  std::vector<int> pos(cols.size());
  std::vector<int> rank_at(cols.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos[order[i]] = int(i);
    rank_at[i] = cols[order[i]].rank;
  }

  auto to_row = [&](const std::map<ColumnCoord, Rational>& raw) {
    Row r;
    for (const auto& [c, v] : raw)
      if (!v.is_zero()) r[pos[col_index.at(c)]] = v;
    return r;
  };

  // Reduced row echelon form over the candidate rows, tracking the
  // combination of original candidates that makes up each pivot row.
  struct PivotRow {
    Row row;
    std::vector<Rational> mix;  // coordinates in candidate space
    int pivot;
  };
  std::vector<PivotRow> pivots;

  for (std::size_t ci = 0; ci < cands.size(); ++ci) {
    Row r = to_row(cand_raw[ci]);
    std::vector<Rational> mix(cands.size(), Rational(0));
    mix[ci] = Rational(1);
    for (const auto& p : pivots) {
      auto it = r.find(p.pivot);
      if (it == r.end() || it->second.is_zero()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : p.row) {
        Rational nv = (r.count(c) ? r[c] : Rational(0)) - f * v;
        if (nv.is_zero())
          r.erase(c);
        else
          r[c] = nv;
      }
      for (std::size_t k = 0; k < mix.size(); ++k) mix[k] -= f * p.mix[k];
    }
    // Pivot only on eliminable coordinates; rows supported purely on the
    // protected ones are never used.
    int piv = -1;
    for (const auto& [c, v] : r)
      if (!v.is_zero() && rank_at[c] < kProtected) {
        piv = c;
        break;
      }
    if (piv < 0) continue;
    Rational lead = r[piv];
    for (auto& [c, v] : r) v = v / lead;
    for (auto& v : mix) v = v / lead;
    // Back-eliminate this pivot from earlier rows.
    for (auto& p : pivots) {
      auto it = p.row.find(piv);
      if (it == p.row.end()) continue;
      Rational f = it->second;
      for (const auto& [c, v] : r) {
        Rational nv = (p.row.count(c) ? p.row[c] : Rational(0)) - f * v;
        if (nv.is_zero())
          p.row.erase(c);
        else
          p.row[c] = nv;
      }
      for (std::size_t k = 0; k < p.mix.size(); ++k) p.mix[k] -= f * mix[k];
    }
    pivots.push_back(PivotRow{std::move(r), std::move(mix), piv});
  }

  // Reduce the expression by the pivot rows.
  Row e = to_row(expr_raw);
  std::vector<Rational> weights(cands.size(), Rational(0));
  for (const auto& p : pivots) {
    auto it = e.find(p.pivot);
    if (it == e.end() || it->second.is_zero()) continue;
    Rational f = it->second;
    for (const auto& [c, v] : p.row) {
      Rational nv = (e.count(c) ? e[c] : Rational(0)) - f * v;
      if (nv.is_zero())
        e.erase(c);
      else
        e[c] = nv;
    }
    for (std::size_t k = 0; k < weights.size(); ++k) weights[k] += f * p.mix[k];
  }

  res.gauge_part = TensorExpr::zero();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    if (weights[k].is_zero()) continue;
    res.gauge_part = res.gauge_part + cands[k].expanded * weights[k];
    res.combination.emplace_back(weights[k], cands[k]);
  }
  res.reduced = expr - res.gauge_part;
  return res;
}

}  // namespace wkg::tensor
