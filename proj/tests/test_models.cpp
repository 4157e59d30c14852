#include <cmath>
#include <random>

#include "doctest.h"
#include "wkg/models.hpp"

using namespace wkg;

namespace {

struct Fields {
  std::vector<double> v, dt, dr;
  FieldChannels chan() const { return {v, dt, dr}; }
};

Fields zero_fields(int n) {
  Fields f;
  f.v.assign(n, 0.0);
  f.dt.assign(n, 0.0);
  f.dr.assign(n, 0.0);
  return f;
}

Fields random_fields(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Fields f = zero_fields(n);
  for (int i = 0; i < n; ++i) {
    f.v[i] = u(rng);
    f.dt[i] = u(rng);
    f.dr[i] = u(rng);
  }
  return f;
}

}  // namespace

TEST_CASE("model constructors validate parameters") {
  CHECK_THROWS_AS(ModelSystem::einstein(WKGModel{0.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelSystem::fr(FRModel{0.0, 1.0, 1.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(ModelSystem::fr(FRModel{-0.1, 1.0, 1.0, {}}), std::invalid_argument);
  ModelSystem m = ModelSystem::fr(FRModel{0.05, 2.0, 1.0, {}});
  CHECK(m.unknowns() == 3);
  CHECK(m.mass_sq(1) == 4.0);
  CHECK(m.mass_sq(0) == 0.0);
}

TEST_CASE("all-zero fields give all-zero sources") {
  int n = 16;
  Fields u = zero_fields(n), phi = zero_fields(n), rho = zero_fields(n);
  ModelSystem fr = ModelSystem::fr(FRModel{0.05, 1.0, 1.0, {}});
  std::vector<FieldChannels> ch{u.chan(), phi.chan(), rho.chan()};
  Sources s = source_terms(fr, ch);
  for (int i = 0; i < n; ++i) {
    CHECK(s.u[i] == 0.0);
    CHECK(s.phi[i] == 0.0);
    CHECK(s.rho_rhs[i] == 0.0);
  }
}

TEST_CASE("FR sources at rho = 0 coincide with the Einstein-type sources") {
  std::mt19937 rng(5);
  int n = 32;
  Fields u = random_fields(n, rng), phi = random_fields(n, rng), rho = zero_fields(n);
  NonlinearityMenu menu{1.0, 0.25, true};
  ModelSystem fr = ModelSystem::fr(FRModel{0.07, 1.3, 2.0, menu});
  ModelSystem wkg = ModelSystem::einstein(WKGModel{1.3, menu});

  std::vector<FieldChannels> ch3{u.chan(), phi.chan(), rho.chan()};
  std::vector<FieldChannels> ch2{u.chan(), phi.chan()};
  Sources sf = source_terms(fr, ch3);
  Sources se = source_terms(wkg, ch2);
  for (int i = 0; i < n; ++i) {
    CHECK(sf.u[i] == se.u[i]);
    CHECK(sf.phi[i] == se.phi[i]);
  }
}

TEST_CASE("einstein limit sources equal the Einstein-type sources pointwise") {
  std::mt19937 rng(9);
  int n = 64;
  Fields u = random_fields(n, rng), phi = random_fields(n, rng);
  NonlinearityMenu menu{0.5, 0.1, true};
  ModelSystem wkg = ModelSystem::einstein(WKGModel{1.0, menu});
  std::vector<FieldChannels> ch2{u.chan(), phi.chan()};
  Sources se = source_terms(wkg, ch2);
  Sources sl = einstein_limit_sources(1.0, menu, u.chan(), phi.chan());
  for (int i = 0; i < n; ++i) {
    CHECK(std::fabs(sl.u[i] - se.u[i]) <= 1e-14 * std::max(1.0, std::fabs(se.u[i])));
    CHECK(sl.u[i] == se.u[i]);
    CHECK(sl.phi[i] == se.phi[i]);
  }
}

TEST_CASE("manufactured sources match the closed-form evaluation") {
  // phi = a sin(w t) g(r), u = b cos(w t) p(r), rho = d t r^2 at a frozen
  // (t, r) sample; channels carry the exact derivatives.
  const double a = 0.3, b = -0.2, d = 0.15, w = 1.7, t = 2.4;
  const double kappa = 0.08, c = 1.2, q = 1.5;
  NonlinearityMenu menu{0.7, 0.3, true};
  int n = 24;
  Fields u = zero_fields(n), phi = zero_fields(n), rho = zero_fields(n);
  std::vector<double> rs(n);
  for (int i = 0; i < n; ++i) {
    double r = 0.1 + 0.05 * i;
    rs[i] = r;
    phi.v[i] = a * std::sin(w * t) * std::exp(-r * r);
    phi.dt[i] = a * w * std::cos(w * t) * std::exp(-r * r);
    phi.dr[i] = a * std::sin(w * t) * (-2.0 * r) * std::exp(-r * r);
    u.v[i] = b * std::cos(w * t) * (1.0 + r);
    u.dt[i] = -b * w * std::sin(w * t) * (1.0 + r);
    u.dr[i] = b * std::cos(w * t);
    rho.v[i] = d * t * r * r;
    rho.dt[i] = d * r * r;
    rho.dr[i] = 2.0 * d * t * r;
  }
  ModelSystem fr = ModelSystem::fr(FRModel{kappa, c, q, menu});
  std::vector<FieldChannels> ch{u.chan(), phi.chan(), rho.chan()};
  Sources s = source_terms(fr, ch);

  for (int i = 0; i < n; ++i) {
    double q0uu = -u.dt[i] * u.dt[i] + u.dr[i] * u.dr[i];
    double q0pp = -phi.dt[i] * phi.dt[i] + phi.dr[i] * phi.dr[i];
    double q0pr = -phi.dt[i] * rho.dt[i] + phi.dr[i] * rho.dr[i];
    double ek = std::exp(-kappa * rho.v[i]);
    double su = menu.q0 * q0uu + menu.quasi * u.dt[i] * u.dt[i] -
                8.0 * M_PI * (2.0 * ek * q0pp + c * c * phi.v[i] * phi.v[i] * ek * ek * u.v[i]) -
                3.0 * kappa * kappa * rho.dt[i] * rho.dt[i] +
                kappa * q * rho.v[i] * rho.v[i] * u.v[i];
    double sphi = c * c * (ek - 1.0) * phi.v[i] + kappa * q0pr;
    double srho = kappa * q * rho.v[i] * rho.v[i] -
                  8.0 * M_PI * (q0pp + 0.5 * c * c * ek * phi.v[i] * phi.v[i]);
    CHECK(s.u[i] == doctest::Approx(su).epsilon(1e-12));
    CHECK(s.phi[i] == doctest::Approx(sphi).epsilon(1e-12));
    CHECK(s.rho_rhs[i] == doctest::Approx(srho).epsilon(1e-12));
  }
}

TEST_CASE("null form catalog") {
  int n = 40;
  Fields u = zero_fields(n), v = zero_fields(n);
  // Outgoing profile f(t - r): Q0 cancels exactly.
  auto fp = [](double x) { return std::exp(-x * x); };
  double t = 3.0;
  for (int i = 0; i < n; ++i) {
    double r = 0.05 * i;
    double df = fp(t - r);
    u.dt[i] = df;
    u.dr[i] = -df;
    v.dt[i] = df;
    v.dr[i] = -df;
  }
  auto q0 = catalog_nullform(u.chan(), v.chan());
  for (int i = 0; i < n; ++i) CHECK(q0[i] == 0.0);

  // Outgoing against ingoing: Q0 = -2 f' g'.
  Fields win = zero_fields(n);
  auto gp = [](double x) { return std::cos(x); };
  for (int i = 0; i < n; ++i) {
    double r = 0.05 * i;
    win.dt[i] = gp(t + r);
    win.dr[i] = gp(t + r);
  }
  auto q0x = catalog_nullform(u.chan(), win.chan());
  for (int i = 0; i < n; ++i) {
    double r = 0.05 * i;
    CHECK(q0x[i] == doctest::Approx(-2.0 * fp(t - r) * gp(t + r)).epsilon(1e-12));
  }
}

TEST_CASE("matter coupling is degree-2 homogeneous in phi") {
  std::mt19937 rng(17);
  int n = 20;
  Fields u = random_fields(n, rng), phi = random_fields(n, rng);
  Fields phi2 = phi;
  for (int i = 0; i < n; ++i) {
    phi2.v[i] *= 2.0;
    phi2.dt[i] *= 2.0;
    phi2.dr[i] *= 2.0;
  }
  NonlinearityMenu menu{0.0, 0.0, true};
  ModelSystem wkg = ModelSystem::einstein(WKGModel{1.0, menu});
  std::vector<FieldChannels> c1{u.chan(), phi.chan()};
  std::vector<FieldChannels> c2{u.chan(), phi2.chan()};
  Sources s1 = source_terms(wkg, c1);
  Sources s2 = source_terms(wkg, c2);
  for (int i = 0; i < n; ++i)
    CHECK(s2.u[i] == doctest::Approx(4.0 * s1.u[i]).epsilon(1e-13));
}

TEST_CASE("non-finite inputs abort with diagnostics") {
  int n = 8;
  Fields u = zero_fields(n), phi = zero_fields(n);
  phi.dt[3] = std::nan("");
  ModelSystem wkg = ModelSystem::einstein(WKGModel{1.0, {}});
  std::vector<FieldChannels> ch{u.chan(), phi.chan()};
  CHECK_THROWS_WITH_AS(source_terms(wkg, ch), doctest::Contains("node 3"),
                       std::runtime_error);
}

TEST_CASE("initial data validation and profiles") {
  InitialData d;
  d.amplitude = 0.0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.amplitude = 1e-3;
  d.support = 1.5;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.support = 0.8;
  CHECK_NOTHROW(d.validate());

  // The bump is C^3 at its edge and supported strictly inside.
  CHECK(InitialData::profile_value(InitialData::Profile::Bump, 0.8, 0.0) == 1.0);
  CHECK(InitialData::profile_value(InitialData::Profile::Bump, 0.8, 0.8) == 0.0);
  CHECK(InitialData::profile_value(InitialData::Profile::Bump, 0.8, 0.9) == 0.0);
  // Slope matches a centered difference of the value.
  for (double r : {0.1, 0.3, 0.62}) {
    double h = 1e-6;
    double num = (InitialData::profile_value(InitialData::Profile::Bump, 0.8, r + h) -
                  InitialData::profile_value(InitialData::Profile::Bump, 0.8, r - h)) /
                 (2.0 * h);
    CHECK(InitialData::profile_slope(InitialData::Profile::Bump, 0.8, r) ==
          doctest::Approx(num).epsilon(1e-7));
  }
}
