#include "wkg/kappa_limit.hpp"

#include <cmath>
#include <future>
#include <sstream>

namespace wkg {

namespace {

double l2_diff(const std::vector<double>& a, const std::vector<double>& b,
               const RadialGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    double r = grid.r(i);
    double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
    double d = a[i] - b[i];
    acc += w * d * d * r * r;
  }
  return std::sqrt(4.0 * M_PI * grid.spacing * acc);
}

double loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [k, e] : pts) {
    double x = std::log(k), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double m = double(pts.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

std::vector<double> algebraic_rho(const FieldChannels& phi, double c) {
  if (phi.dt.size() != phi.value.size() || phi.dr.size() != phi.value.size())
    throw std::invalid_argument("algebraic_rho: missing phi channels");
  const double c2 = c * c;
  std::vector<double> out(phi.value.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 8.0 * M_PI *
             (-phi.dt[i] * phi.dt[i] + phi.dr[i] * phi.dr[i] +
              0.5 * c2 * phi.value[i] * phi.value[i]);
  return out;
}

std::vector<double> algebraic_rho(const EvolutionState& state, const ModelSystem& model) {
  StateDerivs d = compute_state_derivs(state, model);
  FieldChannels phi{state.fields[1].f, state.fields[1].ft, d.u_r[1]};
  return algebraic_rho(phi, model.c());
}

EvolutionState make_initial_state(const InitialData& data, const ModelSystem& model,
                                  const RadialGrid& grid, TimeAxis axis, double start) {
  data.validate();
  if (!(start > 0.0)) throw std::invalid_argument("make_initial_state: start must be positive");

  EvolutionState st;
  st.time = start;
  st.axis = axis;
  st.grid = grid;
  st.fields.resize(model.unknowns());
  for (auto& fp : st.fields) {
    fp.f.assign(grid.n, 0.0);
    fp.ft.assign(grid.n, 0.0);
  }
  for (int i = 0; i < grid.n; ++i) {
    double r = grid.r(i);
    st.fields[0].f[i] =
        data.amplitude * InitialData::profile_value(data.u_profile, data.support, r);
    st.fields[0].ft[i] =
        data.amplitude * InitialData::profile_rate(data.u_profile, data.support, r);
    st.fields[1].f[i] =
        data.amplitude * InitialData::profile_value(data.phi_profile, data.support, r);
    st.fields[1].ft[i] =
        data.amplitude * InitialData::profile_rate(data.phi_profile, data.support, r);
  }

  if (model.kind() == ModelSystem::Kind::FR) {
    if (data.rho_init == InitialData::RhoInit::WellPrepared) {
      // rho_0 = rho_alg of the data and rho_1 = its exact time derivative,
      // with phi_tt taken from the limit equation phi_tt = lap phi - c^2 phi.
      const double c2 = model.c() * model.c();
      const double amp = data.amplitude;
      const auto prof = data.phi_profile;
      for (int i = 0; i < grid.n; ++i) {
        double r = grid.r(i);
        double phi = st.fields[1].f[i];
        double phi_t = st.fields[1].ft[i];
        double phi_r = amp * InitialData::profile_slope(prof, data.support, r);
        double phi_rr = amp * InitialData::profile_curv(prof, data.support, r);
        double phi_rt = amp * InitialData::profile_rate_slope(prof, data.support, r);
        double lap = r > 0.0 ? phi_rr + 2.0 / r * phi_r : 3.0 * phi_rr;
        double phi_tt = lap - c2 * phi;
        st.fields[2].f[i] = 8.0 * M_PI * (-phi_t * phi_t + phi_r * phi_r + 0.5 * c2 * phi * phi);
        st.fields[2].ft[i] =
            8.0 * M_PI * (-2.0 * phi_t * phi_tt + 2.0 * phi_r * phi_rt + c2 * phi * phi_t);
      }
    }
    // Zero-initialized rho exhibits the initial layer (ill-prepared data).
  }
  return st;
}

void SweepConfig::validate() const {
  if (kappas.size() < 2) throw std::invalid_argument("SweepConfig: need at least 2 kappas");
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (!(kappas[i] > 0.0)) throw std::invalid_argument("SweepConfig: kappas must be positive");
    if (i > 0 && !(kappas[i] < kappas[i - 1]))
      throw std::invalid_argument("SweepConfig: kappas must be strictly decreasing");
  }
  if (!(end > start)) throw std::invalid_argument("SweepConfig: empty interval");
  data.validate();
}

ConvergenceReport sweep(const SweepConfig& config) {
  config.validate();

  // Einstein-type reference run with snapshots at the shared cadence.
  WKGModel ref_model{config.c, config.menu};
  ModelSystem ref = ModelSystem::einstein(ref_model);
  RunOptions ref_opts;
  ref_opts.end = config.end;
  ref_opts.cadence = config.cadence;
  ref_opts.store_snapshots = true;
  EvolutionState ref_init =
      make_initial_state(config.data, ref, config.grid, config.axis, config.start);
  Trajectory ref_traj = run(ref_init, ref, config.scheme, ref_opts);

  auto run_member = [&](double kappa) {
    KappaResult res;
    res.kappa = kappa;
    try {
      FRModel frm{kappa, config.c, config.q, config.menu};
      ModelSystem model = ModelSystem::fr(frm);
      EvolutionState init =
          make_initial_state(config.data, model, config.grid, config.axis, config.start);

      std::size_t idx = 0;
      RunOptions opts;
      opts.end = config.end;
      opts.cadence = config.cadence;
      opts.recorder = [&](const EvolutionState& y) {
        SliceRecord rec;
        rec.label = y.time;
        std::vector<double> alg = algebraic_rho(y, model);
        res.err_rho = std::max(res.err_rho, l2_diff(y.fields[2].f, alg, y.grid));
        if (idx < ref_traj.snapshots.size()) {
          const EvolutionState& r = ref_traj.snapshots[idx];
          res.err_u = std::max(res.err_u, l2_diff(y.fields[0].f, r.fields[0].f, y.grid));
          res.err_phi = std::max(res.err_phi, l2_diff(y.fields[1].f, r.fields[1].f, y.grid));
        }
        ++idx;
        return rec;
      };
      run(init, model, config.scheme, opts);
    } catch (const std::exception& e) {
      res.failed = true;
      res.message = e.what();
    }
    return res;
  };

  std::vector<std::future<KappaResult>> futures;
  for (double k : config.kappas)
    futures.push_back(std::async(std::launch::async, run_member, k));

  ConvergenceReport rep;
  rep.q_echo = config.q;
  for (auto& f : futures) rep.entries.push_back(f.get());

  std::vector<std::pair<double, double>> pr, pu, pp;
  for (const auto& e : rep.entries) {
    if (e.failed) continue;
    ++rep.valid;
    if (e.err_rho > 0.0) pr.emplace_back(e.kappa, e.err_rho);
    if (e.err_u > 0.0) pu.emplace_back(e.kappa, e.err_u);
    if (e.err_phi > 0.0) pp.emplace_back(e.kappa, e.err_phi);
  }
  if (pr.size() >= 3) rep.slope_rho = loglog_slope(pr);
  if (pu.size() >= 3) rep.slope_u = loglog_slope(pu);
  if (pp.size() >= 3) rep.slope_phi = loglog_slope(pp);
  return rep;
}

std::string format_report(const ConvergenceReport& rep) {
  std::ostringstream os;
  os << "kappa sweep: " << rep.entries.size() << " members, " << rep.valid
     << " valid, q = " << rep.q_echo << "\n";
  char line[160];
  for (const auto& e : rep.entries) {
    if (e.failed) {
      os << "  kappa " << e.kappa << ": FAILED (" << e.message << ")\n";
      continue;
    }
    std::snprintf(line, sizeof line, "  kappa %-10.5g err_rho %-12.5e err_u %-12.5e err_phi %-12.5e",
                  e.kappa, e.err_rho, e.err_u, e.err_phi);
    os << line << "\n";
  }
  std::snprintf(line, sizeof line, "slopes: rho %.3f u %.3f phi %.3f", rep.slope_rho,
                rep.slope_u, rep.slope_phi);
  os << line << "\n";
  return os.str();
}

}  // namespace wkg
