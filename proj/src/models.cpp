#include "wkg/models.hpp"

#include <cmath>
#include <stdexcept>

namespace wkg {

namespace {

constexpr double kEightPi = 8.0 * M_PI;

void check_finite(const FieldChannels& f, const char* name) {
  for (std::size_t i = 0; i < f.value.size(); ++i) {
    if (!std::isfinite(f.value[i]) || !std::isfinite(f.dt[i]) || !std::isfinite(f.dr[i]))
      throw RuntimeAbort(std::string("source_terms: non-finite ") + name + " at node " +
                         std::to_string(i));
  }
}

// Shared evaluation of the f(R)-type right hand sides; kappa = 0 recovers
// the Einstein-type sources exactly.
void fr_sources_impl(double kappa, double c, double q, const NonlinearityMenu& menu,
                     const FieldChannels& u, const FieldChannels& phi,
                     const FieldChannels& rho, Sources& out) {
  const std::size_t n = u.value.size();
  const double c2 = c * c;
  out.u.assign(n, 0.0);
  out.phi.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const double q0_uu = -u.dt[i] * u.dt[i] + u.dr[i] * u.dr[i];
    const double q0_pp = -phi.dt[i] * phi.dt[i] + phi.dr[i] * phi.dr[i];
    const double ek = std::exp(-kappa * rho.value[i]);
    const double e2k = ek * ek;

    double su = menu.q0 * q0_uu + menu.quasi * u.dt[i] * u.dt[i];
    if (menu.matter)
      su -= kEightPi * (2.0 * ek * q0_pp + c2 * phi.value[i] * phi.value[i] * e2k * u.value[i]);
    su += -3.0 * kappa * kappa * rho.dt[i] * rho.dt[i] +
          kappa * q * rho.value[i] * rho.value[i] * u.value[i];
    out.u[i] = su;

    const double q0_pr = -phi.dt[i] * rho.dt[i] + phi.dr[i] * rho.dr[i];
    out.phi[i] = c2 * (ek - 1.0) * phi.value[i] + kappa * q0_pr;
  }

  if (kappa > 0.0) {
    out.rho_rhs.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double q0_pp = -phi.dt[i] * phi.dt[i] + phi.dr[i] * phi.dr[i];
      const double ek = std::exp(-kappa * rho.value[i]);
      out.rho_rhs[i] = kappa * q * rho.value[i] * rho.value[i] -
                       kEightPi * (q0_pp + 0.5 * c2 * ek * phi.value[i] * phi.value[i]);
    }
  } else {
    out.rho_rhs.clear();
  }
}

}  // namespace

ModelSystem ModelSystem::einstein(const WKGModel& m) {
  if (!(m.c > 0.0)) throw std::invalid_argument("WKGModel: mass c must be positive");
  ModelSystem s;
  s.kind_ = Kind::Einstein;
  s.wkg_ = m;
  return s;
}

ModelSystem ModelSystem::fr(const FRModel& m) {
  if (!(m.c > 0.0)) throw std::invalid_argument("FRModel: mass c must be positive");
  if (!(m.kappa > 0.0)) throw std::invalid_argument("FRModel: kappa must be positive");
  ModelSystem s;
  s.kind_ = Kind::FR;
  s.fr_ = m;
  return s;
}

std::string ModelSystem::unknown_name(int k) const {
  switch (k) {
    case 0: return "u";
    case 1: return "phi";
    case 2: return "rho";
  }
  throw std::out_of_range("ModelSystem: unknown index");
}

double ModelSystem::mass_sq(int k) const {
  if (k == 1) {
    double c = this->c();
    return c * c;
  }
  return 0.0;
}

Sources source_terms(const ModelSystem& model, std::span<const FieldChannels> fields) {
  if (int(fields.size()) != model.unknowns())
    throw std::invalid_argument("source_terms: wrong number of unknowns for the model");
  for (int k = 0; k < model.unknowns(); ++k)
    check_finite(fields[k], model.unknown_name(k).c_str());

  Sources out;
  if (model.kind() == ModelSystem::Kind::FR) {
    const FRModel& m = model.fr_model();
    fr_sources_impl(m.kappa, m.c, m.q, m.menu, fields[0], fields[1], fields[2], out);
  } else {
    const WKGModel& m = model.wkg();
    // Einstein-type sources are the kappa = 0 evaluation with rho = 0.
    std::vector<double> zero(fields[0].value.size(), 0.0);
    FieldChannels rho{zero, zero, zero};
    fr_sources_impl(0.0, m.c, 0.0, m.menu, fields[0], fields[1], rho, out);
  }
  return out;
}

Sources einstein_limit_sources(double c, const NonlinearityMenu& menu,
                               const FieldChannels& u, const FieldChannels& phi) {
  check_finite(u, "u");
  check_finite(phi, "phi");
  Sources out;
  // At kappa = 0 every rho dependence drops out of the first two displayed
  // equations (e^0 = 1), so the algebraic limit of rho never enters.
  std::vector<double> zero(u.value.size(), 0.0);
  FieldChannels rho{zero, zero, zero};
  fr_sources_impl(0.0, c, 0.0, menu, u, phi, rho, out);
  return out;
}

std::vector<double> catalog_nullform(const FieldChannels& u, const FieldChannels& v) {
  if (u.value.size() != v.value.size())
    throw std::invalid_argument("catalog_nullform: size mismatch");
  if (u.dt.size() != u.value.size() || v.dt.size() != v.value.size())
    throw std::invalid_argument("catalog_nullform: missing time-derivative channel");
  std::vector<double> out(u.value.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = -u.dt[i] * v.dt[i] + u.dr[i] * v.dr[i];
  return out;
}

void InitialData::validate() const {
  if (!(amplitude > 0.0)) throw std::invalid_argument("InitialData: amplitude must be positive");
  if (!(support > 0.0 && support <= 1.0))
    throw std::invalid_argument("InitialData: support radius must lie in (0, 1]");
}

double InitialData::profile_value(Profile p, double support, double r) {
  switch (p) {
    case Profile::None:
      return 0.0;
    case Profile::Bump: {
      if (r >= support) return 0.0;
      double x = r / support;
      double w = 1.0 - x * x;
      return w * w * w * w;
    }
    case Profile::Gaussian: {
      // Truncated at the support radius; C^0 cutoff is acceptable because
      // the tail is ~1e-16 of the peak at the default width.
      if (r >= support) return 0.0;
      double w = support / 6.0;
      return std::exp(-r * r / (2.0 * w * w));
    }
    case Profile::Shell: {
      // Annulus centered at support/2 with half-width support/2: vanishes
      // at the origin, supported inside {r < support}.
      double c = 0.5 * support, w = 0.5 * support;
      double x = (r - c) / w;
      if (std::fabs(x) >= 1.0) return 0.0;
      double q = 1.0 - x * x;
      return q * q * q * q;
    }
  }
  return 0.0;
}

double InitialData::profile_slope(Profile p, double support, double r) {
  switch (p) {
    case Profile::None:
      return 0.0;
    case Profile::Bump: {
      if (r >= support) return 0.0;
      double x = r / support;
      double w = 1.0 - x * x;
      return -8.0 * r / (support * support) * w * w * w;
    }
    case Profile::Gaussian: {
      if (r >= support) return 0.0;
      double w = support / 6.0;
      return -r / (w * w) * std::exp(-r * r / (2.0 * w * w));
    }
    case Profile::Shell: {
      double c = 0.5 * support, w = 0.5 * support;
      double x = (r - c) / w;
      if (std::fabs(x) >= 1.0) return 0.0;
      double q = 1.0 - x * x;
      return -8.0 * x / w * q * q * q;
    }
  }
  return 0.0;
}

double InitialData::profile_curv(Profile p, double support, double r) {
  switch (p) {
    case Profile::None:
      return 0.0;
    case Profile::Bump: {
      if (r >= support) return 0.0;
      double x = r / support;
      double q = 1.0 - x * x;
      return 8.0 / (support * support) * q * q * (6.0 * x * x - q);
    }
    case Profile::Gaussian: {
      if (r >= support) return 0.0;
      double w = support / 6.0;
      return (r * r / (w * w) - 1.0) / (w * w) * std::exp(-r * r / (2.0 * w * w));
    }
    case Profile::Shell: {
      double c = 0.5 * support, w = 0.5 * support;
      double x = (r - c) / w;
      if (std::fabs(x) >= 1.0) return 0.0;
      double q = 1.0 - x * x;
      return 8.0 / (w * w) * q * q * (6.0 * x * x - q);
    }
  }
  return 0.0;
}

double InitialData::profile_rate(Profile p, double support, double r) {
  if (p != Profile::Shell) return 0.0;
  if (r <= 0.0) return 0.0;
  return -(profile_slope(p, support, r) + profile_value(p, support, r) / r);
}

double InitialData::profile_rate_slope(Profile p, double support, double r) {
  if (p != Profile::Shell) return 0.0;
  if (r <= 0.0) return 0.0;
  return -(profile_curv(p, support, r) + profile_slope(p, support, r) / r -
           profile_value(p, support, r) / (r * r));
}

}  // namespace wkg
