#include "wkg/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wkg {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_series(const std::vector<SliceRecord>& records) {
  if (records.empty()) throw std::invalid_argument("format_series: no records");
  std::ostringstream os;
  os << "s,sup_u,sup_phi,E0,E1,E2\n";
  for (const auto& rec : records) {
    double sup_u = rec.sup.size() > 0 ? rec.sup[0] : 0.0;
    double sup_phi = rec.sup.size() > 1 ? rec.sup[1] : 0.0;
    os << fmt17(rec.label) << "," << fmt17(sup_u) << "," << fmt17(sup_phi) << ","
       << fmt17(rec.energy[0]) << "," << fmt17(rec.energy[1]) << ","
       << fmt17(rec.energy[2]) << "\n";
  }
  return os.str();
}

void emit_series(const std::vector<SliceRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_series: cannot open " + path);
  out << format_series(records);
  if (!out) throw std::runtime_error("emit_series: write failure on " + path);
}

std::vector<SliceRecord> parse_series(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("parse_series: empty input");
  if (line != "s,sup_u,sup_phi,E0,E1,E2")
    throw std::runtime_error("parse_series: unexpected header '" + line + "'");

  std::vector<SliceRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("parse_series: bad number at line " +
                                 std::to_string(line_no));
      }
    }
    if (vals.size() != 6)
      throw std::runtime_error("parse_series: expected 6 columns at line " +
                               std::to_string(line_no));
    SliceRecord rec;
    rec.label = vals[0];
    rec.sup = {vals[1], vals[2]};
    rec.energy = {vals[3], vals[4], vals[5]};
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SliceRecord> read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_series: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_series(ss.str());
}

}  // namespace wkg
