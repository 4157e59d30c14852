#include "wkg/tensor/expr.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wkg::tensor {

namespace {

// Flat integer encoding of a factor list, used for ordering and equality.
using Key = std::vector<int>;

Key encode_factor(const Factor& f) {
  Key k;
  k.push_back(f.kind == Factor::Kind::EtaUp ? 0 : 1);
  k.push_back(f.a);
  k.push_back(f.b);
  k.push_back(int(f.derivs.size()));
  for (Label d : f.derivs) k.push_back(d);
  return k;
}

Key encode_factors(const std::vector<Factor>& fs) {
  Key k;
  for (const auto& f : fs) {
    Key fk = encode_factor(f);
    k.push_back(int(fk.size()));
    k.insert(k.end(), fk.begin(), fk.end());
  }
  return k;
}

void normalize_slots(Factor& f) {
  if (f.a > f.b) std::swap(f.a, f.b);
  std::sort(f.derivs.begin(), f.derivs.end());
}

struct Occurrence {
  int factor = 0;
  bool deriv_slot = false;  // true: derivative slot, false: index slot
};

// Rename the dummies of a monomial into a canonical range. Dummies are first
// partitioned by a renaming-covariant structural signature (refined a few
// rounds), then the serialized factor list is minimized over all assignments
// that respect the partition. Uniqueness of the result is what matters:
// relabel-equivalent monomials produce identical output.
void canonicalize_monomial(Monomial& m) {
  for (auto& f : m.factors) normalize_slots(f);

  std::map<Label, std::vector<Occurrence>> occs;
  for (int fi = 0; fi < int(m.factors.size()); ++fi) {
    const Factor& f = m.factors[fi];
    occs[f.a].push_back({fi, false});
    occs[f.b].push_back({fi, false});
    for (Label d : f.derivs) occs[d].push_back({fi, true});
  }

  std::vector<Label> dummies;
  for (const auto& [l, oc] : occs) {
    if (oc.size() > 2)
      throw std::logic_error("TensorExpr: index label occurs more than twice");
    if (oc.size() == 2) dummies.push_back(l);
  }
  if (dummies.empty()) {
    std::sort(m.factors.begin(), m.factors.end(),
              [](const Factor& x, const Factor& y) { return encode_factor(x) < encode_factor(y); });
    return;
  }

  // Structural signature refinement.
  std::map<Label, int> cls;
  for (Label d : dummies) cls[d] = 0;
  auto is_dummy = [&](Label l) { return cls.count(l) != 0; };
  for (int round = 0; round < 4; ++round) {
    std::map<Label, Key> sig;
    for (Label d : dummies) {
      std::vector<Key> parts;
      for (const auto& oc : occs[d]) {
        const Factor& f = m.factors[oc.factor];
        Key part;
        part.push_back(f.kind == Factor::Kind::EtaUp ? 0 : 1);
        part.push_back(oc.deriv_slot ? 1 : 0);
        part.push_back(int(f.derivs.size()));
        // Content of the sibling slots: free labels by value, dummies by class.
        std::vector<int> sib;
        auto push_sib = [&](Label l) { sib.push_back(is_dummy(l) ? -1 - cls[l] : l); };
        push_sib(f.a);
        push_sib(f.b);
        for (Label dd : f.derivs) push_sib(dd);
        std::sort(sib.begin(), sib.end());
        part.insert(part.end(), sib.begin(), sib.end());
        parts.push_back(std::move(part));
      }
      std::sort(parts.begin(), parts.end());
      Key flat;
      for (auto& p : parts) {
        flat.push_back(int(p.size()));
        flat.insert(flat.end(), p.begin(), p.end());
      }
      sig[d] = std::move(flat);
    }
    // Class ids are the ranks of the sorted distinct signatures, which makes
    // them covariant under any renaming of the dummies.
    std::map<Key, int> ids;
    for (Label d : dummies) ids[sig[d]] = 0;
    {
      int rank = 0;
      for (auto& [k, v] : ids) v = rank++;
    }
    std::map<Label, int> next;
    for (Label d : dummies) next[d] = ids[sig[d]];
    if (next == cls) break;
    cls = std::move(next);
  }

  // Group dummies by class rank; canonical names are handed out group by
  // group, with all permutations tried inside each group.
  std::map<int, std::vector<Label>> groups;
  for (Label d : dummies) groups[cls[d]].push_back(d);
  std::vector<std::vector<Label>> group_list;
  for (auto& [id, g] : groups) group_list.push_back(g);

  Key best;
  std::vector<Factor> best_factors;
  std::map<Label, Label> ren;

  std::function<void(std::size_t, Label)> rec = [&](std::size_t gi, Label next_name) {
    if (gi == group_list.size()) {
      std::vector<Factor> cand = m.factors;
      for (auto& f : cand) {
        auto rl = [&](Label l) {
          auto it = ren.find(l);
          return it == ren.end() ? l : it->second;
        };
        f.a = rl(f.a);
        f.b = rl(f.b);
        for (auto& d : f.derivs) d = rl(d);
        normalize_slots(f);
      }
      std::sort(cand.begin(), cand.end(), [](const Factor& x, const Factor& y) {
        return encode_factor(x) < encode_factor(y);
      });
      Key k = encode_factors(cand);
      if (best.empty() || k < best) {
        best = std::move(k);
        best_factors = std::move(cand);
      }
      return;
    }
    std::vector<Label> g = group_list[gi];
    std::sort(g.begin(), g.end());
    do {
      for (std::size_t i = 0; i < g.size(); ++i) ren[g[i]] = next_name + Label(i);
      rec(gi + 1, next_name + Label(g.size()));
    } while (std::next_permutation(g.begin(), g.end()));
  };
  rec(0, kDummyBase);

  m.factors = std::move(best_factors);
}

}  // namespace

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors)
    if (f.kind == Factor::Kind::H) ++d;
  return d;
}

int Monomial::deriv_count() const {
  int d = 0;
  for (const auto& f : factors) d += int(f.derivs.size());
  return d;
}

std::string label_name(Label l) {
  static const char* names[] = {"al", "be", "ga", "de", "ep", "ze"};
  if (l >= 0 && l < 6) return names[l];
  if (l >= kDummyBase) return "k" + std::to_string(l - kDummyBase + 1);
  return "i" + std::to_string(l);
}

TensorExpr TensorExpr::constant(const Rational& c) {
  if (c.is_zero()) return zero();
  return TensorExpr({Monomial{c, {}}});
}

TensorExpr TensorExpr::eta_up(Label a, Label b) {
  return TensorExpr({Monomial{Rational(1), {Factor::eta_up(a, b)}}});
}

TensorExpr TensorExpr::h(Label a, Label b, std::vector<Label> derivs) {
  return TensorExpr({Monomial{Rational(1), {Factor::h(a, b, std::move(derivs))}}});
}

TensorExpr TensorExpr::from_monomials(std::vector<Monomial> monos) {
  return TensorExpr(std::move(monos));
}

void TensorExpr::canonicalize() {
  for (auto& m : monos_) canonicalize_monomial(m);

  std::map<Key, Rational> merged;
  for (auto& m : monos_) {
    if (m.coeff.is_zero()) continue;
    Key k = encode_factors(m.factors);
    auto it = merged.find(k);
    if (it == merged.end())
      merged.emplace(std::move(k), m.coeff);
    else
      it->second += m.coeff;
  }

  std::vector<Monomial> out;
  for (auto& m : monos_) {
    Key k = encode_factors(m.factors);
    auto it = merged.find(k);
    if (it != merged.end() && !it->second.is_zero()) {
      out.push_back(Monomial{it->second, m.factors});
      merged.erase(it);
    }
  }
  std::sort(out.begin(), out.end(), [](const Monomial& x, const Monomial& y) {
    return encode_factors(x.factors) < encode_factors(y.factors);
  });
  monos_ = std::move(out);

  // Free labels: multiplicity-one labels, required identical across monomials.
  free_.clear();
  bool first = true;
  for (const auto& m : monos_) {
    std::map<Label, int> mult;
    for (const auto& f : m.factors) {
      mult[f.a]++;
      mult[f.b]++;
      for (Label d : f.derivs) mult[d]++;
    }
    std::vector<Label> fr;
    for (auto& [l, c] : mult)
      if (c == 1) fr.push_back(l);
    if (first) {
      free_ = fr;
      first = false;
    } else if (fr != free_) {
      throw std::logic_error("TensorExpr: inconsistent free indices across monomials");
    }
  }
}

TensorExpr TensorExpr::operator+(const TensorExpr& o) const {
  std::vector<Monomial> m = monos_;
  m.insert(m.end(), o.monos_.begin(), o.monos_.end());
  return TensorExpr(std::move(m));
}

TensorExpr TensorExpr::operator-(const TensorExpr& o) const { return *this + (-o); }

TensorExpr TensorExpr::operator-() const {
  std::vector<Monomial> m = monos_;
  for (auto& mm : m) mm.coeff = -mm.coeff;
  return TensorExpr(std::move(m));
}

TensorExpr TensorExpr::operator*(const Rational& c) const {
  if (c.is_zero()) return zero();
  std::vector<Monomial> m = monos_;
  for (auto& mm : m) mm.coeff *= c;
  return TensorExpr(std::move(m));
}

TensorExpr TensorExpr::operator*(const TensorExpr& o) const {
  // Shift each side's dummies into disjoint ranges so only deliberately
  // shared free labels contract.
  auto shift_dummies = [](const Monomial& m, Label base) {
    Monomial out = m;
    std::map<Label, int> mult;
    for (const auto& f : m.factors) {
      mult[f.a]++;
      mult[f.b]++;
      for (Label d : f.derivs) mult[d]++;
    }
    std::map<Label, Label> ren;
    Label next = base;
    for (auto& [l, c] : mult)
      if (c == 2) ren[l] = next++;
    for (auto& f : out.factors) {
      auto rl = [&](Label l) {
        auto it = ren.find(l);
        return it == ren.end() ? l : it->second;
      };
      f.a = rl(f.a);
      f.b = rl(f.b);
      for (auto& d : f.derivs) d = rl(d);
    }
    return out;
  };

  std::vector<Monomial> prod;
  prod.reserve(monos_.size() * o.monos_.size());
  for (const auto& x : monos_) {
    Monomial xs = shift_dummies(x, kDummyBase + 1000);
    for (const auto& y : o.monos_) {
      Monomial ys = shift_dummies(y, kDummyBase + 2000);
      Monomial p;
      p.coeff = xs.coeff * ys.coeff;
      p.factors = xs.factors;
      p.factors.insert(p.factors.end(), ys.factors.begin(), ys.factors.end());
      prod.push_back(std::move(p));
    }
  }
  return TensorExpr(std::move(prod));
}

TensorExpr TensorExpr::derivative(Label l) const {
  std::vector<Monomial> out;
  for (const auto& m : monos_) {
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
      if (m.factors[i].kind != Factor::Kind::H) continue;
      Monomial d = m;
      d.factors[i].derivs.push_back(l);
      out.push_back(std::move(d));
    }
  }
  return TensorExpr(std::move(out));
}

TensorExpr TensorExpr::truncate(int max_degree) const {
  std::vector<Monomial> out;
  for (const auto& m : monos_)
    if (m.degree() <= max_degree) out.push_back(m);
  return TensorExpr(std::move(out));
}

TensorExpr TensorExpr::swap_free(Label x, Label y) const {
  std::vector<Monomial> out = monos_;
  for (auto& m : out) {
    for (auto& f : m.factors) {
      auto sw = [&](Label l) { return l == x ? y : (l == y ? x : l); };
      f.a = sw(f.a);
      f.b = sw(f.b);
      for (auto& d : f.derivs) d = sw(d);
    }
  }
  return TensorExpr(std::move(out));
}

bool operator==(const TensorExpr& a, const TensorExpr& b) {
  if (a.monos_.size() != b.monos_.size()) return false;
  for (std::size_t i = 0; i < a.monos_.size(); ++i) {
    if (a.monos_[i].coeff != b.monos_[i].coeff) return false;
    if (encode_factors(a.monos_[i].factors) != encode_factors(b.monos_[i].factors))
      return false;
  }
  return true;
}

std::string TensorExpr::str() const {
  if (monos_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : monos_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << m.coeff << ")";
    for (const auto& f : m.factors) {
      os << " ";
      if (f.kind == Factor::Kind::EtaUp) {
        os << "eta^{" << label_name(f.a) << " " << label_name(f.b) << "}";
      } else {
        if (!f.derivs.empty()) {
          os << "d_{";
          for (std::size_t i = 0; i < f.derivs.size(); ++i)
            os << (i ? " " : "") << label_name(f.derivs[i]);
          os << "}";
        }
        os << "h_{" << label_name(f.a) << " " << label_name(f.b) << "}";
      }
    }
  }
  return os.str();
}

Rational ComponentSampler::h_component(const std::vector<int>& derivs, int i, int j) {
  std::vector<int> d = derivs;
  std::sort(d.begin(), d.end());
  int a = std::min(i, j), b = std::max(i, j);
  std::string key;
  for (int x : d) key += std::to_string(x) + ",";
  key += "|" + std::to_string(a) + "," + std::to_string(b);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  std::uint64_t hsh = seed_;
  for (char c : key) hsh = hsh * 1099511628211ULL + std::uint64_t(c);
  hsh ^= hsh >> 33;
  hsh *= 0xff51afd7ed558ccdULL;
  hsh ^= hsh >> 33;
  // Small exact rationals keep 64-bit arithmetic comfortably in range.
  std::int64_t num = std::int64_t(hsh % 19) - 9;
  std::int64_t den = 1 + std::int64_t((hsh >> 8) % 7);
  Rational r(num, den);
  cache_.emplace(std::move(key), r);
  return r;
}

DegreePoly eval_components(const TensorExpr& e, const std::map<Label, int>& free_values,
                           ComponentSampler& sampler) {
  DegreePoly acc(8, Rational(0));
  auto eta = [](int i, int j) -> Rational {
    if (i != j) return Rational(0);
    return i == 0 ? Rational(-1) : Rational(1);
  };

  for (const auto& m : e.monomials()) {
    std::set<Label> dummy_set;
    {
      std::map<Label, int> mult;
      for (const auto& f : m.factors) {
        mult[f.a]++;
        mult[f.b]++;
        for (Label d : f.derivs) mult[d]++;
      }
      for (auto& [l, c] : mult)
        if (c == 2) dummy_set.insert(l);
    }
    std::vector<Label> dummies(dummy_set.begin(), dummy_set.end());

    int deg = m.degree();
    if (deg >= int(acc.size())) acc.resize(deg + 1, Rational(0));

    std::map<Label, int> assign;
    for (const auto& [l, v] : free_values) assign[l] = v;

    std::int64_t total = 1;
    for (std::size_t i = 0; i < dummies.size(); ++i) total *= 4;
    for (std::int64_t comb = 0; comb < total; ++comb) {
      std::int64_t c = comb;
      for (Label d : dummies) {
        assign[d] = int(c & 3);
        c >>= 2;
      }
      Rational val = m.coeff;
      bool zero = false;
      for (const auto& f : m.factors) {
        auto look = [&](Label l) {
          auto it = assign.find(l);
          if (it == assign.end())
            throw std::logic_error("eval_components: unassigned free label " + label_name(l));
          return it->second;
        };
        Rational fv;
        if (f.kind == Factor::Kind::EtaUp) {
          fv = eta(look(f.a), look(f.b));
        } else {
          std::vector<int> dv;
          for (Label d : f.derivs) dv.push_back(look(d));
          fv = sampler.h_component(dv, look(f.a), look(f.b));
        }
        if (fv.is_zero()) {
          zero = true;
          break;
        }
        val *= fv;
      }
      if (!zero) acc[deg] += val;
    }
  }
  return acc;
}

}  // namespace wkg::tensor
