#include "wkg/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace wkg {

const char* kCodeVersion = "wkglab 0.1.0";

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Field {
  std::string section, key;
  std::function<void(RunConfig&, const std::string&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(d)) throw std::invalid_argument("non-finite");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(line, "expected on/off, got '" + v + "'");
}

void require(bool ok, int line, const std::string& what) {
  if (!ok) throw ConfigError(line, what);
}

const std::vector<Field>& fields() {
  auto dbl = [](double RunConfig::*m, auto check, const char* what) {
    return std::pair(
        std::function<void(RunConfig&, const std::string&, int)>(
            [m, check, what](RunConfig& c, const std::string& v, int line) {
              double d = parse_double(v, line);
              require(check(d), line, std::string(what));
              c.*m = d;
            }),
        std::function<std::string(const RunConfig&)>(
            [m](const RunConfig& c) { return fmt17(c.*m); }));
  };
  auto bol = [](bool RunConfig::*m) {
    return std::pair(
        std::function<void(RunConfig&, const std::string&, int)>(
            [m](RunConfig& c, const std::string& v, int line) { c.*m = parse_bool(v, line); }),
        std::function<std::string(const RunConfig&)>(
            [m](const RunConfig& c) { return c.*m ? "on" : "off"; }));
  };
  auto str = [](std::string RunConfig::*m, std::vector<std::string> allowed,
                const char* what) {
    return std::pair(
        std::function<void(RunConfig&, const std::string&, int)>(
            [m, allowed, what](RunConfig& c, const std::string& v, int line) {
              if (!allowed.empty()) {
                bool ok = false;
                for (auto& a : allowed) ok = ok || a == v;
                require(ok, line, std::string(what) + ", got '" + v + "'");
              }
              c.*m = v;
            }),
        std::function<std::string(const RunConfig&)>(
            [m](const RunConfig& c) { return c.*m; }));
  };

  auto pos = [](double d) { return d > 0.0; };
  auto nonneg = [](double d) { return d >= 0.0; };
  auto any = [](double) { return true; };

  static const std::vector<Field> table = [&] {
    std::vector<Field> t;
    auto add = [&](const char* sec, const char* key, auto pair) {
      t.push_back(Field{sec, key, pair.first, pair.second});
    };
    add("model", "type", str(&RunConfig::model_type, {"wkg", "fr"}, "type must be wkg or fr"));
    add("model", "c", dbl(&RunConfig::c, pos, "c must be positive"));
    add("model", "kappa", dbl(&RunConfig::kappa, pos, "kappa must be positive"));
    add("model", "q", dbl(&RunConfig::q, any, ""));
    add("model", "matter", bol(&RunConfig::matter));
    add("model", "q0", dbl(&RunConfig::q0, any, ""));
    add("model", "quasi", dbl(&RunConfig::quasi, any, ""));

    add("grid", "spacing", dbl(&RunConfig::spacing, pos, "spacing must be positive"));
    add("grid", "r_max", dbl(&RunConfig::r_max, pos, "r_max must be positive"));

    add("scheme", "cfl", dbl(&RunConfig::cfl, [](double d) { return d > 0.0 && d <= 0.5; },
                             "cfl must lie in (0, 0.5]"));
    add("scheme", "step", dbl(&RunConfig::step, nonneg, "step must be >= 0"));
    add("scheme", "dissipation",
        dbl(&RunConfig::dissipation, [](double d) { return d >= 0.0 && d < 1.0; },
            "dissipation must lie in [0, 1)"));
    add("scheme", "stiff_rho", bol(&RunConfig::stiff_rho));
    add("scheme", "sponge_width", dbl(&RunConfig::sponge_width, any, ""));
    add("scheme", "sponge_strength",
        dbl(&RunConfig::sponge_strength, nonneg, "sponge_strength must be >= 0"));

    add("run", "mode",
        str(&RunConfig::mode, {"cartesian", "hyperboloidal"},
            "mode must be cartesian or hyperboloidal"));
    add("run", "start", dbl(&RunConfig::start, pos, "start must be positive"));
    add("run", "end", dbl(&RunConfig::end, pos, "end must be positive"));
    add("run", "cadence", dbl(&RunConfig::cadence, pos, "cadence must be positive"));
    t.push_back(Field{
        "run", "norm_order",
        [](RunConfig& c, const std::string& v, int line) {
          int k = parse_int(v, line);
          require(k >= 0 && k <= 2, line, "norm_order must be 0, 1 or 2");
          c.norm_order = k;
        },
        [](const RunConfig& c) { return std::to_string(c.norm_order); }});

    add("data", "amplitude", dbl(&RunConfig::amplitude, pos, "amplitude must be positive"));
    add("data", "support",
        dbl(&RunConfig::support, [](double d) { return d > 0.0 && d <= 1.0; },
            "support must lie in (0, 1]"));
    add("data", "u_profile",
        str(&RunConfig::u_profile, {"bump", "gaussian", "none"}, "unknown profile"));
    add("data", "phi_profile",
        str(&RunConfig::phi_profile, {"bump", "gaussian", "none"}, "unknown profile"));
    add("data", "rho_data",
        str(&RunConfig::rho_data, {"well_prepared", "zero"},
            "rho_data must be well_prepared or zero"));

    add("output", "directory", str(&RunConfig::directory, {}, ""));
    add("output", "series", str(&RunConfig::series, {}, ""));
    add("output", "checkpoint", str(&RunConfig::checkpoint, {}, ""));
    add("output", "checkpoint_cadence",
        dbl(&RunConfig::checkpoint_cadence, nonneg, "checkpoint_cadence must be >= 0"));

    add("analysis", "fit_lo", dbl(&RunConfig::fit_lo, pos, "fit_lo must be positive"));
    add("analysis", "fit_hi", dbl(&RunConfig::fit_hi, pos, "fit_hi must be positive"));
    add("analysis", "fit_field",
        str(&RunConfig::fit_field, {"u", "phi"}, "fit_field must be u or phi"));
    return t;
  }();
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  std::map<std::string, int> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      require(line.back() == ']', line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& f : fields()) known = known || f.section == section;
      require(known, line_no, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    require(eq != std::string::npos, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!section.empty(), line_no, "key '" + key + "' outside any section");

    const Field* match = nullptr;
    for (const auto& f : fields())
      if (f.section == section && f.key == key) match = &f;
    require(match != nullptr, line_no, "unknown key '" + key + "' in [" + section + "]");

    std::string full = section + "." + key;
    if (seen.count(full))
      throw ConfigError(line_no, "duplicate key '" + key + "' (first at line " +
                                     std::to_string(seen[full]) + ")");
    seen[full] = line_no;
    match->set(config, value, line_no);
  }

  // Cross-field validation.
  if (config.end <= config.start) throw ConfigError(0, "run end must exceed run start");
  if (config.r_max / config.spacing < 8) throw ConfigError(0, "grid too small");
  if (config.fit_hi <= config.fit_lo) throw ConfigError(0, "empty fit window");
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  std::string current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      if (!current.empty()) os << "\n";
      os << "[" << f.section << "]\n";
      current = f.section;
    }
    os << f.key << " = " << f.get(config) << "\n";
  }
  return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

RadialGrid RunConfig::make_grid() const {
  int n = int(std::lround(r_max / spacing)) + 1;
  return RadialGrid::uniform(spacing, n);
}

SchemeConfig RunConfig::make_scheme() const {
  SchemeConfig s;
  s.cfl = cfl;
  s.step = step;
  s.dissipation = dissipation;
  s.stiff_rho = stiff_rho;
  s.sponge_width = sponge_width < 0.0 ? 0.05 * r_max : sponge_width;
  s.sponge_strength = sponge_strength;
  return s;
}

ModelSystem RunConfig::make_model() const {
  NonlinearityMenu menu{q0, quasi, matter};
  if (model_type == "fr") return ModelSystem::fr(FRModel{kappa, c, q, menu});
  return ModelSystem::einstein(WKGModel{c, menu});
}

InitialData RunConfig::make_data() const {
  auto profile = [](const std::string& p) {
    if (p == "bump") return InitialData::Profile::Bump;
    if (p == "gaussian") return InitialData::Profile::Gaussian;
    return InitialData::Profile::None;
  };
  InitialData d;
  d.amplitude = amplitude;
  d.support = support;
  d.u_profile = profile(u_profile);
  d.phi_profile = profile(phi_profile);
  d.rho_init = rho_data == "zero" ? InitialData::RhoInit::Zero
                                  : InitialData::RhoInit::WellPrepared;
  return d;
}

TimeAxis RunConfig::axis() const {
  return mode == "hyperboloidal" ? TimeAxis::Hyperboloidal : TimeAxis::Cartesian;
}

std::string format_manifest(const RunManifest& m) {
  std::ostringstream os;
  os << "# run manifest\n";
  os << "version = " << m.code_version << "\n";
  os << "started = " << m.started_at << "\n";
  os << "finished = " << m.finished_at << "\n";
  os << "outcome = " << m.outcome << "\n";
  for (const auto& s : m.summary) os << "summary: " << s << "\n";
  os << "\n# configuration (defaults applied)\n";
  os << serialize_config(m.config);
  return os.str();
}

void write_manifest(const RunManifest& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << format_manifest(m);
}

}  // namespace wkg
