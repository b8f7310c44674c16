#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qmimo/linalg.hpp"

namespace qmimo {

// Fixed 12-significant-digit rendering so identical runs emit identical
// bytes.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double p) { return 10.0 * std::log10(p); }

// Parses the channel schema {"rows": [[...], ...]} into a Matrix.
inline Matrix parse_channel_json(const nlohmann::json& j, const std::string& context) {
  if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty())
    throw std::runtime_error(context + ": expected a non-empty \"rows\" array");
  const auto& rows = j["rows"];
  const std::size_t nc = rows[0].is_array() ? rows[0].size() : 0;
  if (nc == 0)
    throw std::runtime_error(context + ": first row is empty or not an array");
  Matrix m(rows.size(), nc);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != nc)
      throw std::runtime_error(context + ": ragged row " + std::to_string(r) +
                               " (expected " + std::to_string(nc) + " entries)");
    for (std::size_t c = 0; c < nc; ++c) {
      if (!rows[r][c].is_number())
        throw std::runtime_error(context + ": non-numeric entry at row " +
                                 std::to_string(r) + ", column " + std::to_string(c));
      const double v = rows[r][c].get<double>();
      if (!std::isfinite(v))
        throw std::runtime_error(context + ": non-finite entry at row " +
                                 std::to_string(r) + ", column " + std::to_string(c));
      m(r, c) = v;
    }
  }
  return m;
}

inline Matrix parse_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("channel file not found: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("channel file " + path + ": " + e.what());
  }
  return parse_channel_json(j, "channel file " + path);
}

}  // namespace qmimo
