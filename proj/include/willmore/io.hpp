#pragma once

// JSON and CSV serialization of results.

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "willmore/immersion.hpp"
#include "willmore/linalg.hpp"
#include "willmore/quadrature.hpp"

namespace willmore {

using Json = nlohmann::ordered_json;

inline Json to_json(const SymmetricMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Keys: n, p, metric, h, H_vec, H, S, rho_sq.
inline Json to_json(const ShapeData& sd) {
  Json h = Json::array();
  for (const auto& m : sd.second_fundamental.matrices()) h.push_back(to_json(m));
  return Json{{"n", sd.n},          {"p", sd.p},
              {"metric", to_json(sd.metric)}, {"h", std::move(h)},
              {"H_vec", sd.mean_vector}, {"H", sd.mean_norm},
              {"S", sd.S},          {"rho_sq", sd.rho_sq}};
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Header: the axis resolutions. Then one line per index of the leading
/// axes, holding the values along the last axis.
inline void write_csv(std::ostream& os, const GridFunction& f) {
  for (std::size_t d = 0; d < f.shape.size(); ++d) os << (d ? "," : "") << f.shape[d];
  os << '\n';
  const std::size_t width = f.shape.empty() ? 1 : f.shape.back();
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    os << format_real(f.values[k]);
    os << ((k + 1) % width == 0 ? '\n' : ',');
  }
}

/// Table with a header row.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
    os << '\n';
  }
}

namespace detail {

inline void flatten(const Json& j, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_real(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace detail

/// key,value lines with dotted paths for nested fields.
inline void write_flat_csv(std::ostream& os, const Json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(j, "", rows);
  os << "key,value\n";
  for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
}

}  // namespace willmore
