#pragma once

// Ensemble files (CSV and raw binary) and sequence manifests.
//
// CSV: one line per component, s comma-separated values, optional first
// line "# m=<m> s=<s>".
// Binary: "IFLT", u32 version (1), u32 m, u32 s, then m*s little-endian
// f64 in row-major order.
// Manifest: JSON {"m": m, "s": s, "files": [...]} with paths relative to
// the manifest's directory.

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iflt/errors.hpp"
#include "iflt/signal.hpp"

namespace iflt::io {

namespace fs = std::filesystem;

inline constexpr char kMagic[4] = {'I', 'F', 'L', 'T'};
inline constexpr std::uint32_t kBinaryVersion = 1;

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << bytes;
}

// ---- CSV -------------------------------------------------------------------

inline std::string matrix_to_csv(const Matrix& m) {
  std::string out = "# m=" + std::to_string(m.rows()) + " s=" + std::to_string(m.cols()) + "\n";
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

inline Matrix matrix_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  long declared_m = -1, declared_s = -1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (std::sscanf(line.c_str(), "# m=%ld s=%ld", &declared_m, &declared_s) != 2) {
        declared_m = declared_s = -1;
      }
      continue;
    }
    std::vector<double> row;
    const char* p = line.c_str();
    while (*p) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(p, &end);
      if (end == p || errno == ERANGE) throw ParseError("CSV: bad number in line '" + line + "'");
      row.push_back(v);
      p = end;
      while (*p == ' ' || *p == '\t') ++p;
      if (*p == ',') {
        ++p;
      } else if (*p) {
        throw ParseError("CSV: unexpected character in line '" + line + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV: no data");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  if (declared_m >= 0 && (declared_m != m.rows() || declared_s != m.cols())) {
    throw ParseError("CSV: header shape does not match data");
  }
  if (!m.allFinite()) throw ParseError("CSV: non-finite value");
  return m;
}

// ---- binary ----------------------------------------------------------------

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

inline std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  }
  return v;
}

}  // namespace detail

inline std::string matrix_to_binary(const Matrix& m) {
  std::string out(kMagic, 4);
  detail::put_u32(out, kBinaryVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(m.rows()));
  detail::put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) detail::put_u64(out, std::bit_cast<std::uint64_t>(m(r, c)));
  }
  return out;
}

inline Matrix matrix_from_binary(const std::string& in) {
  if (in.size() < 16 || std::memcmp(in.data(), kMagic, 4) != 0) throw ParseError("binary: bad magic");
  const auto version = static_cast<std::uint32_t>(detail::get_le(in, 4, 4));
  if (version != kBinaryVersion) throw ParseError("binary: unsupported version " + std::to_string(version));
  const auto rows = detail::get_le(in, 8, 4);
  const auto cols = detail::get_le(in, 12, 4);
  if (in.size() != 16 + 8 * rows * cols) throw ParseError("binary: size does not match header");
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t pos = 16;
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c, pos += 8) m(r, c) = std::bit_cast<double>(detail::get_le(in, pos, 8));
  }
  if (!m.allFinite()) throw ParseError("binary: non-finite value");
  return m;
}

// ---- files -----------------------------------------------------------------

inline bool is_binary_path(const fs::path& path) { return path.extension() == ".bin"; }

inline Matrix read_matrix(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) return matrix_from_binary(bytes);
  return matrix_from_csv(bytes);
}

inline void write_matrix(const fs::path& path, const Matrix& m) {
  write_file(path, is_binary_path(path) ? matrix_to_binary(m) : matrix_to_csv(m));
}

/// Loads an ensemble and centers it unless it is already centered.
inline Ensemble read_ensemble(const fs::path& path) {
  try {
    return ensure_centered(read_matrix(path));
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_ensemble(const fs::path& path, const Ensemble& e) { write_matrix(path, e.data()); }

/// Writes each item as <stem>_<index>.<ext> next to the manifest.
inline void write_sequence(const fs::path& manifest, const SignalSequence& seq, const std::string& stem,
                           const std::string& ext = ".bin") {
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu%s", stem.c_str(), i, ext.c_str());
    write_ensemble(manifest.parent_path() / name, seq[i]);
    files.push_back(name);
  }
  nlohmann::json j = {{"m", seq.common_m()}, {"s", seq.common_s()}, {"files", files}};
  write_file(manifest, j.dump(2) + "\n");
}

inline SignalSequence read_sequence(const fs::path& manifest) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + manifest.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("files") || !j["files"].is_array()) {
    throw ParseError("manifest " + manifest.string() + ": missing 'files' array");
  }
  std::vector<Ensemble> items;
  for (const auto& f : j["files"]) {
    if (!f.is_string()) throw ParseError("manifest: file entries must be strings");
    items.push_back(read_ensemble(manifest.parent_path() / f.get<std::string>()));
  }
  SignalSequence seq(std::move(items));
  if (j.contains("m") && j["m"].get<long>() != seq.common_m()) throw ParseError("manifest: m mismatch");
  if (j.contains("s") && j["s"].get<long>() != seq.common_s()) throw ParseError("manifest: s mismatch");
  return seq;
}

}  // namespace iflt::io
