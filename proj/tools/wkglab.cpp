// Command-line surface: simulate, ricci, sweep-kappa, decay-fit, energy,
// checkpoint. Exit status 0 on success, 1 on validation errors, 2 on
// runtime aborts or failed verification.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wkg/analysis.hpp"
#include "wkg/checkpoint.hpp"
#include "wkg/config.hpp"
#include "wkg/kappa_limit.hpp"
#include "wkg/series_io.hpp"
#include "wkg/tensor/lemma.hpp"

namespace fs = std::filesystem;

namespace {

std::string now_string() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path resolve_output(const std::string& directory) {
  fs::path p(directory);
  if (p.is_relative()) {
    if (const char* root = std::getenv("WKGLAB_OUT")) p = fs::path(root) / p;
  }
  fs::create_directories(p);
  return p;
}

int run_simulate(const std::string& config_path, const std::string& output_override) {
  wkg::RunConfig config = wkg::parse_config(read_file(config_path));
  if (!output_override.empty()) config.directory = output_override;

  wkg::RunManifest manifest;
  manifest.config = config;
  manifest.code_version = wkg::kCodeVersion;
  manifest.started_at = now_string();

  fs::path outdir = resolve_output(config.directory);
  wkg::ModelSystem model = config.make_model();
  wkg::RadialGrid grid = config.make_grid();
  wkg::SchemeConfig scheme = config.make_scheme();

  try {
    wkg::EvolutionState init =
        wkg::make_initial_state(config.make_data(), model, grid, config.axis(), config.start);

    double next_checkpoint = config.checkpoint_cadence > 0.0
                                 ? config.start + config.checkpoint_cadence
                                 : std::numeric_limits<double>::infinity();
    wkg::RunOptions opts;
    opts.end = config.end;
    opts.cadence = config.cadence;
    auto norm_recorder = wkg::make_norm_recorder(model, config.norm_order);
    opts.recorder = [&](const wkg::EvolutionState& y) {
      if (!config.checkpoint.empty() && y.time >= next_checkpoint - 1e-10) {
        wkg::write_checkpoint({config.model_type, y}, (outdir / config.checkpoint).string());
        next_checkpoint += config.checkpoint_cadence;
      }
      return norm_recorder(y);
    };

    wkg::Trajectory traj = wkg::run(init, model, scheme, opts);
    wkg::emit_series(traj.records, (outdir / config.series).string());
    if (!config.checkpoint.empty())
      wkg::write_checkpoint({config.model_type, traj.snapshots.empty()
                                                    ? init
                                                    : traj.snapshots.back()},
                            (outdir / config.checkpoint).string());

    const auto& last = traj.records.back();
    char line[160];
    std::snprintf(line, sizeof line, "final sup_u %.6e sup_phi %.6e E2 %.6e",
                  last.sup.size() > 0 ? last.sup[0] : 0.0,
                  last.sup.size() > 1 ? last.sup[1] : 0.0, last.energy[2]);
    manifest.summary.push_back(line);

    if (config.fit_hi > config.fit_lo) {
      std::vector<std::pair<double, double>> series;
      int col = config.fit_field == "phi" ? 1 : 0;
      for (const auto& rec : traj.records)
        if (int(rec.sup.size()) > col && rec.sup[col] > 0.0)
          series.emplace_back(rec.label, rec.sup[col]);
      try {
        wkg::DecayFit fit = wkg::fit_decay(series, config.fit_lo, config.fit_hi);
        std::snprintf(line, sizeof line, "decay exponent (%s) %.4f residual %.3e",
                      config.fit_field.c_str(), fit.exponent, fit.residual_se);
        manifest.summary.push_back(line);
      } catch (const std::exception& e) {
        manifest.summary.push_back(std::string("decay fit skipped: ") + e.what());
      }
    }
    wkg::MonitorVerdict verdict = wkg::energy_monitor(traj.records, config.norm_order, 2.0);
    std::snprintf(line, sizeof line, "energy E%d %s (worst ratio %.4f at %.4g)",
                  config.norm_order, verdict.bounded ? "bounded" : "amplified",
                  verdict.worst_ratio, verdict.worst_label);
    manifest.summary.push_back(line);

    manifest.outcome = "completed";
    manifest.finished_at = now_string();
    wkg::write_manifest(manifest, (outdir / "manifest.txt").string());
    for (const auto& s : manifest.summary) std::cout << s << "\n";
    std::cout << "series: " << (outdir / config.series).string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    manifest.outcome = std::string("aborted: ") + e.what();
    manifest.finished_at = now_string();
    wkg::write_manifest(manifest, (outdir / "manifest.txt").string());
    std::cerr << "run aborted: " << e.what() << "\n";
    return 2;
  }
}

int run_ricci(int order, const std::string& report_path) {
  using namespace wkg::tensor;
  std::ostringstream out;
  bool ok = false;
  if (order == 2) {
    LemmaReport rep = verify_lemma();
    out << format_report(rep);
    ok = rep.ok();
  } else {
    PerturbativeMetric metric(1);
    TensorExpr two_r = ricci(metric, 1, kAlpha, kBeta) * wkg::Rational(2);
    GaugeIdeal ideal(metric, 1);
    GaugeReduction red = reduce_mod_gauge(two_r, ideal);
    Label l = kDummyBase, lp = kDummyBase + 1;
    TensorExpr minus_box =
        TensorExpr::eta_up(l, lp) * TensorExpr::h(kAlpha, kBeta, {l, lp}) * wkg::Rational(-1);
    ok = red.reduced == minus_box;
    out << "linear reduction: 2 R_ab mod gauge\n";
    out << "reduced: " << red.reduced.str() << "\n";
    out << "gauge multiples:\n";
    for (auto& [w, el] : red.combination)
      out << "  (" << w << ") * " << el.description << "\n";
    out << "matches -box h_ab: " << (ok ? "yes" : "NO") << "\n";
  }
  std::cout << out.str();
  if (!report_path.empty()) {
    std::ofstream f(report_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write report to " << report_path << "\n";
      return 1;
    }
    f << out.str();
  }
  return ok ? 0 : 2;
}

int run_sweep(const std::string& kappas_arg, const std::string& config_path,
              const std::string& out_dir) {
  wkg::RunConfig config = wkg::parse_config(read_file(config_path));
  wkg::SweepConfig sc;
  {
    std::istringstream in(kappas_arg);
    std::string tok;
    while (std::getline(in, tok, ',')) sc.kappas.push_back(std::stod(tok));
  }
  sc.c = config.c;
  sc.q = config.q;
  sc.menu = wkg::NonlinearityMenu{config.q0, config.quasi, config.matter};
  sc.data = config.make_data();
  sc.grid = config.make_grid();
  sc.scheme = config.make_scheme();
  sc.axis = config.axis();
  sc.start = config.start;
  sc.end = config.end;
  sc.cadence = config.cadence;

  wkg::ConvergenceReport rep = wkg::sweep(sc);
  fs::path dir = resolve_output(out_dir);

  std::ofstream csv(dir / "kappa_report.csv", std::ios::binary);
  csv << "kappa,err_rho,err_u,err_phi\n";
  char line[200];
  for (const auto& e : rep.entries) {
    if (e.failed) continue;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", e.kappa, e.err_rho,
                  e.err_u, e.err_phi);
    csv << line;
  }
  std::ofstream slope(dir / "kappa_slope.txt", std::ios::binary);
  std::snprintf(line, sizeof line,
                "slope_rho %.4f slope_u %.4f slope_phi %.4f valid %d q %.17g\n",
                rep.slope_rho, rep.slope_u, rep.slope_phi, rep.valid, rep.q_echo);
  slope << line;

  std::cout << wkg::format_report(rep);
  for (const auto& e : rep.entries)
    if (e.failed) std::cerr << "warning: kappa " << e.kappa << " failed: " << e.message << "\n";
  return 0;
}

int run_decay_fit(const std::string& input, const std::string& window,
                  const std::string& column) {
  auto records = wkg::read_series(input);
  double lo = 0, hi = 0;
  if (std::sscanf(window.c_str(), "%lf:%lf", &lo, &hi) != 2)
    throw CLI::ValidationError("--window expects LO:HI");
  int col = column == "sup_phi" ? 1 : 0;
  std::vector<std::pair<double, double>> series;
  for (const auto& rec : records)
    series.emplace_back(rec.label, rec.sup[col]);
  wkg::DecayFit fit = wkg::fit_decay(series, lo, hi);
  std::printf("exponent %.3f\n", fit.exponent);
  std::printf("residual_se %.6e samples %d window %g:%g\n", fit.residual_se, fit.samples,
              fit.window_lo, fit.window_hi);
  return 0;
}

int run_energy(const std::string& input, int order, double factor) {
  auto records = wkg::read_series(input);
  wkg::MonitorVerdict v = wkg::energy_monitor(records, order, factor);
  std::printf("%s\n", v.bounded ? "bounded" : "amplified");
  std::printf("worst_ratio %.6f at %.6g (factor %.3f)\n", v.worst_ratio, v.worst_label,
              factor);
  return 0;
}

int run_checkpoint(const std::string& action, const std::string& file) {
  if (action == "info") {
    std::cout << wkg::describe_checkpoint(file);
    return 0;
  }
  // verify: read, rewrite, compare byte for byte.
  wkg::Checkpoint cp = wkg::read_checkpoint(file);
  fs::path tmp = fs::path(file).concat(".verify.tmp");
  wkg::write_checkpoint(cp, tmp.string());
  std::string original = read_file(file), rewritten = read_file(tmp.string());
  fs::remove(tmp);
  if (original == rewritten) {
    std::cout << "round trip: bit-exact (" << original.size() << " bytes)\n";
    return 0;
  }
  std::cerr << "round trip: MISMATCH\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wkglab: wave-Klein-Gordon systems on hyperboloidal foliations"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  auto* simulate = app.add_subcommand("simulate", "run a configured evolution");
  simulate->add_option("--config", config_path, "run configuration file")->required();
  simulate->add_option("--output", output_override, "override the output directory");

  int ricci_order = 2;
  std::string report_path;
  auto* ricci_cmd = app.add_subcommand("ricci", "wave-gauge Ricci decomposition checks");
  auto* verify = ricci_cmd->add_subcommand("verify", "verify the decomposition");
  verify->add_option("--order", ricci_order, "perturbation order (1 or 2)")
      ->check(CLI::Range(1, 2));
  verify->add_option("--report", report_path, "write the report to a file");

  std::string kappas_arg, sweep_config, sweep_out = "out";
  auto* sweep_cmd = app.add_subcommand("sweep-kappa", "relaxation-limit kappa sweep");
  sweep_cmd->add_option("--kappas", kappas_arg, "comma-separated decreasing kappa list")
      ->required();
  sweep_cmd->add_option("--config", sweep_config, "base run configuration")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory");

  std::string fit_input, fit_window = "5:50", fit_column = "sup_u";
  auto* fit_cmd = app.add_subcommand("decay-fit", "fit a decay exponent from a series CSV");
  fit_cmd->add_option("--input", fit_input, "series CSV")->required();
  fit_cmd->add_option("--window", fit_window, "fit window LO:HI");
  fit_cmd->add_option("--column", fit_column, "sup_u or sup_phi")
      ->check(CLI::IsMember({"sup_u", "sup_phi"}));

  std::string energy_input;
  int energy_order = 2;
  double energy_factor = 2.0;
  auto* energy_cmd = app.add_subcommand("energy", "bounded-energy verdict from a series CSV");
  energy_cmd->add_option("--input", energy_input, "series CSV")->required();
  energy_cmd->add_option("--order", energy_order, "energy order")->check(CLI::Range(0, 2));
  energy_cmd->add_option("--factor", energy_factor, "boundedness factor");

  std::string cp_action, cp_file;
  auto* cp_cmd = app.add_subcommand("checkpoint", "inspect or verify a checkpoint file");
  cp_cmd->add_option("action", cp_action, "info or verify")
      ->required()
      ->check(CLI::IsMember({"info", "verify"}));
  cp_cmd->add_option("file", cp_file, "checkpoint file")->required();

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return run_simulate(config_path, output_override);
    if (verify->parsed()) return run_ricci(ricci_order, report_path);
    if (ricci_cmd->parsed()) {
      std::cerr << "usage: wkglab ricci verify [--order N] [--report PATH]\n";
      return 1;
    }
    if (sweep_cmd->parsed()) return run_sweep(kappas_arg, sweep_config, sweep_out);
    if (fit_cmd->parsed()) return run_decay_fit(fit_input, fit_window, fit_column);
    if (energy_cmd->parsed()) return run_energy(energy_input, energy_order, energy_factor);
    if (cp_cmd->parsed()) return run_checkpoint(cp_action, cp_file);
    std::cerr << app.help();
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const wkg::RuntimeAbort& e) {
    std::cerr << "runtime abort: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
