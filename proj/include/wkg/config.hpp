#pragma once

#include <string>

#include "wkg/kappa_limit.hpp"

namespace wkg {

/// Raised on malformed configuration text; carries the offending line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error("config line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Full run description in the sectioned key=value format. Every field has
/// a documented default; parsing is strict (unknown keys are errors).
struct RunConfig {
  // [model]
  std::string model_type = "wkg";  // wkg | fr
  double c = 1.0;
  double kappa = 0.05;  // fr only
  double q = 1.0;       // fr only
  bool matter = true;
  double q0 = 1.0;
  double quasi = 0.1;

  // [grid]
  double spacing = 0.03;
  double r_max = 60.0;

  // [scheme]
  double cfl = 0.4;
  double step = 0.0;
  double dissipation = 0.0;
  bool stiff_rho = true;
  double sponge_width = -1.0;  // < 0: auto (5% of r_max)
  double sponge_strength = 2.0;

  // [run]
  std::string mode = "cartesian";  // cartesian | hyperboloidal
  double start = 2.0;
  double end = 50.0;
  double cadence = 0.5;
  int norm_order = 2;

  // [data]
  double amplitude = 1e-3;
  double support = 0.8;
  std::string u_profile = "bump";    // bump | gaussian | none
  std::string phi_profile = "bump";  // bump | gaussian | none
  std::string rho_data = "well_prepared";  // well_prepared | zero

  // [output]
  std::string directory = "out";
  std::string series = "series.csv";
  std::string checkpoint;           // empty: no checkpoints
  double checkpoint_cadence = 0.0;  // 0: final state only

  // [analysis]
  double fit_lo = 5.0;
  double fit_hi = 50.0;
  std::string fit_field = "u";  // u | phi

  // Derived accessors (validated).
  RadialGrid make_grid() const;
  SchemeConfig make_scheme() const;
  ModelSystem make_model() const;
  InitialData make_data() const;
  TimeAxis axis() const;
};

/// Parse the sectioned key=value format. Unknown keys or sections, type
/// mismatches and out-of-range values raise ConfigError with line numbers.
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse(serialize(c)) == c field for field.
std::string serialize_config(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Terminal-state run manifest.
struct RunManifest {
  RunConfig config;
  std::string code_version;
  std::string started_at;
  std::string finished_at;
  std::string outcome;  // completed | aborted: <reason>
  std::vector<std::string> summary;
};

std::string format_manifest(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

extern const char* kCodeVersion;

}  // namespace wkg
