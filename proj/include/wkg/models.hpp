#pragma once

#include <span>
#include <string>
#include <vector>

#include "wkg/foliation.hpp"

namespace wkg {

/// Quadratic self-interaction catalog for the wave unknown: a Q0 null form
/// Q0(u,u) = -(d_t u)^2 + (d_r u)^2, the representative quasi-null term
/// (d_t u)^2 with both derivatives un-contracted, and the 8 pi matter
/// coupling switch.
struct NonlinearityMenu {
  double q0 = 1.0;
  double quasi = 0.1;
  bool matter = true;
};

/// Einstein-type scalar wave-Klein-Gordon model: wave unknown u and massive
/// field phi with
///   box u          = F(u, du) - 8 pi (2 Q0(phi,phi) + c^2 phi^2 u)
///   box phi - c^2 phi = 0.
struct WKGModel {
  double c = 1.0;
  NonlinearityMenu menu;
};

/// f(R)-type model with relaxation parameter kappa: unknowns (u, phi, rho),
///   box u            = F(u,du) - 8 pi (2 e^{-k rho} Q0(phi,phi) + c^2 phi^2 e^{-2 k rho} u)
///                      - 3 k^2 (d_t rho)^2 + k q rho^2 u
///   box phi - c^2 phi = c^2 (e^{-k rho} - 1) phi + k Q0(phi, rho)
///   3 k box rho - rho = k q rho^2 - 8 pi (Q0(phi,phi) + (c^2/2) e^{-k rho} phi^2).
struct FRModel {
  double kappa = 0.05;
  double c = 1.0;
  double q = 1.0;  // coefficient of the k O(rho^2) remainder
  NonlinearityMenu menu;
};

/// Runtime dispatch over the two model families.
class ModelSystem {
 public:
  enum class Kind { Einstein, FR };

  static ModelSystem einstein(const WKGModel& m);
  static ModelSystem fr(const FRModel& m);

  Kind kind() const { return kind_; }
  const WKGModel& wkg() const { return wkg_; }
  const FRModel& fr_model() const { return fr_; }

  int unknowns() const { return kind_ == Kind::FR ? 3 : 2; }
  std::string unknown_name(int k) const;
  double mass_sq(int k) const;  // c^2 for phi, 0 otherwise (rho is stiff)
  double c() const { return kind_ == Kind::FR ? fr_.c : wkg_.c; }
  const NonlinearityMenu& menu() const { return kind_ == Kind::FR ? fr_.menu : wkg_.menu; }
  /// Klein-Gordon-like unknowns get the outer sponge layer.
  bool kg_like(int k) const { return k >= 1; }

 private:
  Kind kind_ = Kind::Einstein;
  WKGModel wkg_;
  FRModel fr_;
};

/// Per-unknown channels at the nodes of one surface.
struct FieldChannels {
  std::span<const double> value;
  std::span<const double> dt;
  std::span<const double> dr;
};

/// Source terms in box-normal form. For u and phi the output is the right
/// hand side S of (box f - m^2 f = S); for rho it is the right hand side of
/// (3 k box rho - rho = S_rho). Non-finite inputs abort with the node index.
struct Sources {
  std::vector<double> u;
  std::vector<double> phi;
  std::vector<double> rho_rhs;  // empty for Einstein-type models
};

Sources source_terms(const ModelSystem& model, std::span<const FieldChannels> fields);

/// The Einstein limit of the f(R) sources: kappa = 0 with rho replaced by
/// its algebraic limit. Pointwise identical to the Einstein-type sources.
Sources einstein_limit_sources(double c, const NonlinearityMenu& menu,
                               const FieldChannels& u, const FieldChannels& phi);

/// Q0(u, v) = -d_t u d_t v + d_r u d_r v at the Minkowski background.
std::vector<double> catalog_nullform(const FieldChannels& u, const FieldChannels& v);

/// Closed-form initial data: compactly supported radial profiles scaled by
/// an overall amplitude. Centered profiles are time-symmetric; the shell
/// profile is an annulus with outgoing time derivatives f_t = -(f' + f/r),
/// which avoids the focusing transient of collapsing data.
struct InitialData {
  enum class Profile { None, Bump, Gaussian, Shell };
  enum class RhoInit { WellPrepared, Zero };

  double amplitude = 1e-3;
  double support = 0.8;  // support radius; must stay inside {r < 1}
  Profile u_profile = Profile::Bump;
  Profile phi_profile = Profile::Bump;
  RhoInit rho_init = RhoInit::WellPrepared;

  void validate() const;
  /// Profile value and radial derivatives, closed form.
  static double profile_value(Profile p, double support, double r);
  static double profile_slope(Profile p, double support, double r);
  static double profile_curv(Profile p, double support, double r);
  /// Time-derivative profile: zero for the centered (time-symmetric)
  /// shapes, the outgoing combination for the shell.
  static double profile_rate(Profile p, double support, double r);
  static double profile_rate_slope(Profile p, double support, double r);
};

}  // namespace wkg
