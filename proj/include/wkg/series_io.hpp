#pragma once

#include <string>
#include <vector>

#include "wkg/evolution.hpp"

namespace wkg {

/// Emit the analysis series as CSV with the fixed header
///   s,sup_u,sup_phi,E0,E1,E2
/// at 17 significant digits; byte-deterministic for identical inputs.
std::string format_series(const std::vector<SliceRecord>& records);
void emit_series(const std::vector<SliceRecord>& records, const std::string& path);

/// Parse a series CSV back into records (lossless round trip).
std::vector<SliceRecord> parse_series(const std::string& text);
std::vector<SliceRecord> read_series(const std::string& path);

}  // namespace wkg
