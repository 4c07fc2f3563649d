#pragma once

// JSON (de)serialization of FilterModel:
//
//   { "version": 1, "p": int, "q_specs": [...], "t_mats": [[[f64]]],
//     "a_mats": optional, "fixed_r_k": optional, "meta": {...} }
//
// Doubles are written in shortest round-trip form, so save/load is lossless.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iflt/errors.hpp"
#include "iflt/interp_filter.hpp"

namespace iflt {

inline constexpr int kModelVersion = 1;

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a non-empty array of rows");
  const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
  if (cols == 0) throw ParseError("matrix rows must be non-empty arrays");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError("matrix entries must be numbers");
      m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  if (!m.allFinite()) throw ParseError("matrix entries must be finite");
  return m;
}

inline json q_spec_to_json(const QOperatorSpec& q) {
  return std::visit(
      [](const auto& op) -> json {
        using Op = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<Op, Identity>) {
          return {{"kind", "Identity"}};
        } else if constexpr (std::is_same_v<Op, SequenceLag>) {
          return {{"kind", "SequenceLag"}, {"d", op.d}};
        } else if constexpr (std::is_same_v<Op, ComponentShift>) {
          return {{"kind", "ComponentShift"}, {"d", op.d}};
        } else {
          return {{"kind", "WeightedPrefixSum"}, {"weights", op.weights}};
        }
      },
      q.kind);
}

inline QOperatorSpec q_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError("q_spec must be an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  auto count = [&](const char* key) -> std::size_t {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      throw ParseError("q_spec " + kind + ": '" + key + "' must be a non-negative integer");
    }
    return j[key].get<std::size_t>();
  };
  if (kind == "Identity") return QOperatorSpec::identity();
  if (kind == "SequenceLag") return QOperatorSpec::lag(count("d"));
  if (kind == "ComponentShift") return QOperatorSpec::shift(count("d"));
  if (kind == "WeightedPrefixSum") {
    if (!j.contains("weights") || !j["weights"].is_array()) throw ParseError("WeightedPrefixSum needs 'weights'");
    std::vector<double> w;
    for (const auto& v : j["weights"]) {
      if (!v.is_number()) throw ParseError("WeightedPrefixSum weights must be numbers");
      w.push_back(v.get<double>());
    }
    QOperatorSpec q = QOperatorSpec::prefix_sum(std::move(w));
    try {
      q.validate();
    } catch (const InvalidInput& e) {
      throw ParseError(e.what());
    }
    return q;
  }
  throw ParseError("unknown q_spec kind '" + kind + "'");
}

inline json meta_to_json(const FitMeta& meta) {
  json j = {{"residual_tolerance", meta.residual_tolerance},
            {"samples", meta.samples},
            {"node_indices", meta.node_indices},
            {"interp_residuals", meta.interp_residuals},
            {"residual_scales", meta.residual_scales},
            {"degenerate_terms", meta.degenerate_terms}};
  if (meta.pinv_relative_cutoff) j["pinv_relative_cutoff"] = *meta.pinv_relative_cutoff;
  return j;
}

inline FitMeta meta_from_json(const json& j) {
  FitMeta meta;
  if (!j.is_object()) throw ParseError("meta must be an object");
  meta.residual_tolerance = j.value("residual_tolerance", 1e-6);
  meta.samples = j.value("samples", std::size_t{0});
  meta.node_indices = j.value("node_indices", std::vector<std::size_t>{});
  meta.interp_residuals = j.value("interp_residuals", std::vector<double>{});
  meta.residual_scales = j.value("residual_scales", std::vector<double>{});
  meta.degenerate_terms = j.value("degenerate_terms", std::vector<std::size_t>{});
  if (j.contains("pinv_relative_cutoff")) meta.pinv_relative_cutoff = j["pinv_relative_cutoff"].get<double>();
  return meta;
}

inline std::string save_model(const FilterModel& model) {
  json j;
  j["version"] = kModelVersion;
  j["p"] = model.p;
  j["q_specs"] = json::array();
  for (const auto& q : model.q_specs) j["q_specs"].push_back(q_spec_to_json(q));
  j["t_mats"] = json::array();
  for (const auto& t : model.t_mats) j["t_mats"].push_back(matrix_to_json(t));
  if (model.a_mats) {
    j["a_mats"] = json::array();
    for (const auto& a : *model.a_mats) j["a_mats"].push_back(matrix_to_json(a));
  }
  if (!model.fixed_k.empty()) {
    j["fixed_r_k"] = json::array();
    for (const auto& row : model.fixed_k) {
      json jr = json::array();
      for (const auto& k : row) jr.push_back(matrix_to_json(k));
      j["fixed_r_k"].push_back(std::move(jr));
    }
  }
  j["meta"] = meta_to_json(model.meta);
  return j.dump();
}

inline FilterModel load_model(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("model: top level must be an object");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != kModelVersion) {
      throw ParseError("model: unsupported or missing version");
    }
    if (!j.contains("p") || !j["p"].is_number_unsigned() || j["p"].get<std::size_t>() == 0) {
      throw ParseError("model: 'p' must be a positive integer");
    }
    FilterModel model;
    model.p = j["p"].get<std::size_t>();
    if (!j.contains("q_specs") || !j["q_specs"].is_array() || j["q_specs"].size() != model.p) {
      throw ParseError("model: 'q_specs' must list p operators");
    }
    for (const auto& q : j["q_specs"]) model.q_specs.push_back(q_spec_from_json(q));
    if (!j.contains("t_mats") || !j["t_mats"].is_array() || j["t_mats"].size() != model.p) {
      throw ParseError("model: 't_mats' must list p matrices");
    }
    for (const auto& t : j["t_mats"]) model.t_mats.push_back(matrix_from_json(t));
    for (const auto& t : model.t_mats) {
      if (t.rows() != model.t_mats.front().rows() || t.cols() != model.t_mats.front().cols()) {
        throw ParseError("model: all T matrices must share a shape");
      }
    }
    if (j.contains("a_mats") && !j["a_mats"].is_null()) {
      if (!j["a_mats"].is_array() || j["a_mats"].size() != model.p) throw ParseError("model: 'a_mats' must list p matrices");
      std::vector<Matrix> a;
      for (const auto& m : j["a_mats"]) a.push_back(matrix_from_json(m));
      model.a_mats = std::move(a);
    }
    if (j.contains("fixed_r_k")) {
      const json& fk = j["fixed_r_k"];
      if (!fk.is_array() || fk.size() != model.p) throw ParseError("model: 'fixed_r_k' must have p rows");
      for (std::size_t r = 0; r < fk.size(); ++r) {
        if (!fk[r].is_array() || fk[r].size() != r) throw ParseError("model: 'fixed_r_k' row " + std::to_string(r) + " must have " + std::to_string(r) + " matrices");
        std::vector<Matrix> row;
        for (const auto& m : fk[r]) row.push_back(matrix_from_json(m));
        model.fixed_k.push_back(std::move(row));
      }
    }
    if (j.contains("meta")) model.meta = meta_from_json(j["meta"]);
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

}  // namespace iflt
