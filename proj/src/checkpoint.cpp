#include "wkg/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wkg {

namespace {

constexpr const char* kSchema = "wkglab-checkpoint 1";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_block(std::ostream& out, const std::vector<double>& v) {
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(v.data()),
              std::streamsize(v.size() * sizeof(double)));
  } else {
    for (double d : v) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, 8);
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = char((bits >> (8 * i)) & 0xff);
      out.write(b, 8);
    }
  }
}

void read_block(std::istream& in, std::vector<double>& v) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
  } else {
    for (double& d : v) {
      char b[8];
      in.read(b, 8);
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= std::uint64_t(std::uint8_t(b[i])) << (8 * i);
      std::memcpy(&d, &bits, 8);
    }
  }
  if (!in) throw std::runtime_error("checkpoint: truncated field block");
}

}  // namespace

void write_checkpoint(const Checkpoint& cp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  const EvolutionState& st = cp.state;
  out << kSchema << "\n";
  out << "model " << cp.model_tag << "\n";
  out << "axis " << (st.axis == TimeAxis::Hyperboloidal ? "hyperboloidal" : "cartesian")
      << "\n";
  out << "time " << fmt17(st.time) << "\n";
  out << "spacing " << fmt17(st.grid.spacing) << "\n";
  out << "nodes " << st.grid.n << "\n";
  out << "unknowns " << st.fields.size() << "\n";
  out << "end-header\n";
  for (const auto& fp : st.fields) {
    write_block(out, fp.f);
    write_block(out, fp.ft);
  }
  if (!out) throw std::runtime_error("checkpoint: write failure on " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);

  auto expect_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line))
      throw std::runtime_error(std::string("checkpoint: missing ") + what);
    return line;
  };
  auto keyed = [&](const char* key) {
    std::string line = expect_line(key);
    std::string prefix = std::string(key) + " ";
    if (line.rfind(prefix, 0) != 0)
      throw std::runtime_error("checkpoint: expected '" + std::string(key) + "', got '" +
                               line + "'");
    return line.substr(prefix.size());
  };

  if (expect_line("schema id") != kSchema)
    throw std::runtime_error("checkpoint: unknown schema id");

  Checkpoint cp;
  cp.model_tag = keyed("model");
  std::string axis = keyed("axis");
  cp.state.axis = axis == "hyperboloidal" ? TimeAxis::Hyperboloidal : TimeAxis::Cartesian;
  cp.state.time = std::stod(keyed("time"));
  double spacing = std::stod(keyed("spacing"));
  int nodes = std::stoi(keyed("nodes"));
  int unknowns = std::stoi(keyed("unknowns"));
  if (expect_line("end marker") != "end-header")
    throw std::runtime_error("checkpoint: missing end-header");

  cp.state.grid = RadialGrid::uniform(spacing, nodes);
  cp.state.fields.resize(unknowns);
  for (auto& fp : cp.state.fields) {
    fp.f.resize(nodes);
    fp.ft.resize(nodes);
    read_block(in, fp.f);
    read_block(in, fp.ft);
  }
  return cp;
}

std::string describe_checkpoint(const std::string& path) {
  Checkpoint cp = read_checkpoint(path);
  std::ostringstream os;
  os << "schema: " << kSchema << "\n";
  os << "model: " << cp.model_tag << "\n";
  os << "axis: " << (cp.state.axis == TimeAxis::Hyperboloidal ? "hyperboloidal" : "cartesian")
     << "\n";
  os << "time: " << fmt17(cp.state.time) << "\n";
  os << "grid: " << cp.state.grid.n << " nodes, spacing " << fmt17(cp.state.grid.spacing)
     << ", r_max " << fmt17(cp.state.grid.r_max()) << "\n";
  os << "unknowns: " << cp.state.fields.size() << "\n";
  return os.str();
}

}  // namespace wkg
