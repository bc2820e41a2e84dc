// Copyright 2026 The schurkit Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "schurkit/matrix.hpp"

namespace schurkit {

using json = nlohmann::ordered_json;

/// Matrix file schema:
///   {"m": rows, "n": cols, "entries": [[[re, im], ...], ...]}
/// with one [re, im] pair per entry, row by row. Serialization uses the
/// shortest decimal that reparses to the same double, so a round trip is
/// bit-exact.
inline json matrix_to_json(const Matrix& mat) {
  json j;
  j["m"] = mat.rows();
  j["n"] = mat.cols();
  json rows = json::array();
  for (std::size_t i = 0; i < mat.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < mat.cols(); ++k)
      row.push_back(json::array({mat(i, k).real(), mat(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

namespace detail {

inline double number_field(const json& v, std::size_t i, std::size_t k, const char* part) {
  if (!v.is_number())
    throw Error("matrix parse: entry (" + std::to_string(i) + "," + std::to_string(k) + ") " +
                part + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d))
    throw Error("matrix parse: entry (" + std::to_string(i) + "," + std::to_string(k) + ") " +
                part + " is not finite");
  return d;
}

}  // namespace detail

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error("matrix parse: top-level value must be an object");
  for (const char* field : {"m", "n", "entries"})
    if (!j.contains(field)) throw Error(std::string("matrix parse: missing field '") + field + "'");
  if (!j["m"].is_number_unsigned() || !j["n"].is_number_unsigned())
    throw Error("matrix parse: 'm' and 'n' must be nonnegative integers");
  const std::size_t m = j["m"].get<std::size_t>();
  const std::size_t n = j["n"].get<std::size_t>();
  if (m == 0 || n == 0) throw Error("matrix parse: dimensions must be positive");
  const json& rows = j["entries"];
  if (!rows.is_array() || rows.size() != m)
    throw Error("matrix parse: 'entries' must hold exactly " + std::to_string(m) + " rows, got " +
                std::to_string(rows.is_array() ? rows.size() : 0));
  Matrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw Error("matrix parse: row " + std::to_string(i) + " must hold exactly " +
                  std::to_string(n) + " entries, got " +
                  std::to_string(row.is_array() ? row.size() : 0));
    for (std::size_t k = 0; k < n; ++k) {
      const json& pair = row[k];
      if (!pair.is_array() || pair.size() != 2)
        throw Error("matrix parse: entry (" + std::to_string(i) + "," + std::to_string(k) +
                    ") must be a [re, im] pair");
      mat(i, k) = cplx{detail::number_field(pair[0], i, k, "real part"),
                       detail::number_field(pair[1], i, k, "imaginary part")};
    }
  }
  return mat;
}

inline std::string serialize_matrix(const Matrix& m) { return matrix_to_json(m).dump(); }

inline Matrix parse_matrix_text(const std::string& text, const std::string& origin = "<string>") {
  json j;
  try {
    j = json::parse(text);
  } catch (const nlohmann::json::out_of_range& e) {
    throw Error(origin + ": non-finite value (out of double range): " + e.what());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(origin + ": malformed matrix file: " + e.what());
  }
  try {
    return matrix_from_json(j);
  } catch (const Error& e) {
    throw Error(origin + ": " + e.what());
  }
}

inline Matrix parse_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_text(buf.str(), path);
}

inline void write_matrix(const Matrix& m, const std::string& path) {
  if (!m.has_finite_entries()) throw Error("write_matrix: non-finite entries");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << matrix_to_json(m).dump(2) << "\n";
  if (!out) throw Error("failed writing matrix file: " + path);
}

/// FNV-1a over raw bytes; identifies input files in reports.
inline std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace schurkit
