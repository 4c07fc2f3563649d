#pragma once

// Synthetic benchmark: a slowly drifting sequence of low-rank reference
// ensembles X_1..X_N, Hadamard-noise observations Y_i = X_i o U_i, lag-based
// interpolation filters of several orders fitted on a sparse node set, and
// per-pair Wiener and RLS comparators.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iflt/baselines.hpp"
#include "iflt/error_analysis.hpp"
#include "iflt/errors.hpp"
#include "iflt/interp_filter.hpp"
#include "iflt/io.hpp"
#include "iflt/model_io.hpp"
#include "iflt/parallel.hpp"
#include "iflt/signal.hpp"

namespace iflt::bench {

struct NoiseConfig {
  std::string kind = "HadamardUniform";
  double low = 0.0;
  double high = 1.0;
};

struct RlsConfig {
  double lambda = 0.99;
  /// P_0 = delta I. Unset: delta = 100 n / trace(E[yy]) per pair.
  std::optional<double> delta;
};

struct ExperimentConfig {
  std::size_t n_signals = 100;
  Index m = 32;
  Index n = 32;
  Index s = 512;
  Index rank = 4;
  double drift = 0.1;
  std::vector<std::size_t> p_values = {3, 5};
  /// Zero-based node positions used when p == |s_indices|.
  std::vector<std::size_t> s_indices = {17, 56, 82};
  /// Explicit node positions per order; overrides s_indices.
  std::map<std::size_t, std::vector<std::size_t>> node_sets;
  NoiseConfig noise;
  std::uint64_t seed = 1;
  RlsConfig rls;
  bool baselines = true;
  bool fixed_r = false;
  double residual_tolerance = 1e-6;
  std::optional<double> pinv_relative_cutoff;

  ApplyMode apply_mode() const { return fixed_r ? ApplyMode::FixedR : ApplyMode::PerSignal; }
  SpectralTolerance tolerance() const { return {pinv_relative_cutoff}; }

  /// Node positions for the order-p filter: node_sets[p], else s_indices
  /// when it has p entries, else p evenly spaced positions.
  std::vector<std::size_t> nodes_for(std::size_t p) const {
    if (auto it = node_sets.find(p); it != node_sets.end()) return it->second;
    if (s_indices.size() == p) return s_indices;
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < p; ++k) {
      nodes.push_back(static_cast<std::size_t>((static_cast<double>(k) + 0.5) * static_cast<double>(n_signals) /
                                               static_cast<double>(p)));
    }
    return nodes;
  }

  void validate() const {
    auto positions = [&](const std::vector<std::size_t>& idx, const std::string& path) {
      for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= n_signals) throw ConfigError(path + "[" + std::to_string(k) + "]", "position outside [0, n_signals)");
        if (k > 0 && idx[k] <= idx[k - 1]) throw ConfigError(path + "[" + std::to_string(k) + "]", "positions must be strictly increasing");
      }
    };
    if (n_signals < 1) throw ConfigError("n_signals", "must be >= 1");
    if (m < 1) throw ConfigError("m", "must be >= 1");
    if (n != m) throw ConfigError("n", "must equal m for the Hadamard observation model");
    if (s < 2) throw ConfigError("s", "must be >= 2");
    if (rank < 1) throw ConfigError("rank", "must be >= 1");
    if (!(drift >= 0.0) || !std::isfinite(drift)) throw ConfigError("drift", "must be finite and >= 0");
    if (p_values.empty()) throw ConfigError("p_values", "must not be empty");
    for (std::size_t k = 0; k < p_values.size(); ++k) {
      if (p_values[k] < 1 || p_values[k] > n_signals) {
        throw ConfigError("p_values[" + std::to_string(k) + "]", "must lie in [1, n_signals]");
      }
    }
    positions(s_indices, "s_indices");
    for (const auto& [p, idx] : node_sets) {
      const std::string path = "node_sets." + std::to_string(p);
      if (idx.size() != p) throw ConfigError(path, "must list exactly p positions");
      positions(idx, path);
    }
    if (noise.kind != "HadamardUniform") throw ConfigError("noise.kind", "only HadamardUniform is supported");
    if (!std::isfinite(noise.low) || !std::isfinite(noise.high) || noise.low > noise.high) {
      throw ConfigError("noise", "need finite low <= high");
    }
    if (!(rls.lambda > 0.0 && rls.lambda <= 1.0)) throw ConfigError("rls.lambda", "must lie in (0, 1]");
    if (rls.delta && !(*rls.delta > 0.0)) throw ConfigError("rls.delta", "must be > 0");
    if (!(residual_tolerance > 0.0)) throw ConfigError("tolerances.interp_residual", "must be > 0");
    if (pinv_relative_cutoff && !(*pinv_relative_cutoff > 0.0)) {
      throw ConfigError("tolerances.pinv_relative_cutoff", "must be > 0");
    }
  }
};

namespace detail {

template <class T>
T field(const nlohmann::json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(path + key, "has the wrong type");
  }
}

}  // namespace detail

/// Parses a config object. Every field is optional; unknown keys are rejected.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::field;
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const std::vector<std::string> known = {"n_signals", "m", "n", "s", "rank", "drift", "p_values", "s_indices",
                                                 "node_sets", "noise", "seed", "rls", "baselines", "fixed_r",
                                                 "tolerances"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");
  }
  ExperimentConfig c;
  c.n_signals = field(j, "n_signals", c.n_signals, "");
  c.m = field(j, "m", c.m, "");
  c.n = field(j, "n", c.m, "");
  c.s = field(j, "s", c.s, "");
  c.rank = field(j, "rank", c.rank, "");
  c.drift = field(j, "drift", c.drift, "");
  c.p_values = field(j, "p_values", c.p_values, "");
  c.s_indices = field(j, "s_indices", c.s_indices, "");
  c.seed = field(j, "seed", c.seed, "");
  c.baselines = field(j, "baselines", c.baselines, "");
  c.fixed_r = field(j, "fixed_r", c.fixed_r, "");
  if (j.contains("node_sets")) {
    if (!j["node_sets"].is_object()) throw ConfigError("node_sets", "must be an object keyed by p");
    for (const auto& [key, value] : j["node_sets"].items()) {
      std::size_t p = 0;
      try {
        p = std::stoul(key);
      } catch (const std::exception&) {
        throw ConfigError("node_sets." + key, "key must be an integer order");
      }
      try {
        c.node_sets[p] = value.get<std::vector<std::size_t>>();
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("node_sets." + key, "must be a list of positions");
      }
    }
  }
  if (j.contains("noise")) {
    const auto& nj = j["noise"];
    if (!nj.is_object()) throw ConfigError("noise", "must be an object");
    c.noise.kind = field(nj, "kind", c.noise.kind, "noise.");
    c.noise.low = field(nj, "low", c.noise.low, "noise.");
    c.noise.high = field(nj, "high", c.noise.high, "noise.");
  }
  if (j.contains("rls")) {
    const auto& rj = j["rls"];
    if (!rj.is_object()) throw ConfigError("rls", "must be an object");
    c.rls.lambda = field(rj, "lambda", c.rls.lambda, "rls.");
    if (rj.contains("delta") && !rj["delta"].is_null()) c.rls.delta = field(rj, "delta", 1.0, "rls.");
  }
  if (j.contains("tolerances")) {
    const auto& tj = j["tolerances"];
    if (!tj.is_object()) throw ConfigError("tolerances", "must be an object");
    c.residual_tolerance = field(tj, "interp_residual", c.residual_tolerance, "tolerances.");
    if (tj.contains("pinv_relative_cutoff") && !tj["pinv_relative_cutoff"].is_null()) {
      c.pinv_relative_cutoff = field(tj, "pinv_relative_cutoff", 1e-12, "tolerances.");
    }
  }
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json node_sets = nlohmann::json::object();
  for (const auto& [p, idx] : c.node_sets) node_sets[std::to_string(p)] = idx;
  nlohmann::json j = {{"n_signals", c.n_signals}, {"m", c.m}, {"n", c.n}, {"s", c.s}, {"rank", c.rank},
                      {"drift", c.drift}, {"p_values", c.p_values}, {"s_indices", c.s_indices},
                      {"node_sets", node_sets},
                      {"noise", {{"kind", c.noise.kind}, {"low", c.noise.low}, {"high", c.noise.high}}},
                      {"seed", c.seed}, {"baselines", c.baselines}, {"fixed_r", c.fixed_r},
                      {"rls", {{"lambda", c.rls.lambda}}},
                      {"tolerances", {{"interp_residual", c.residual_tolerance}}}};
  if (c.rls.delta) j["rls"]["delta"] = *c.rls.delta;
  if (c.pinv_relative_cutoff) j["tolerances"]["pinv_relative_cutoff"] = *c.pinv_relative_cutoff;
  return j;
}

// ---- data generation -----------------------------------------------------

namespace detail {

inline Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) out(r, c) = dist(rng);
  }
  return out;
}

inline Matrix low_rank(std::mt19937_64& rng, Index m, Index s, Index rank) {
  const Matrix left = gaussian(rng, m, rank);
  const Matrix right = gaussian(rng, rank, s);
  return left * right / std::sqrt(static_cast<double>(rank));
}

/// Independent stream per purpose so adding draws to one does not shift another.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// X_i = base + drift (cos(2 pi i / N) D_1 + sin(2 pi i / N) D_2), centered;
/// base, D_1 and D_2 are seeded random rank-`rank` matrices.
inline SignalSequence gen_reference_sequence(const ExperimentConfig& cfg) {
  cfg.validate();
  auto rng = detail::stream(cfg.seed, 1);
  const Matrix base = detail::low_rank(rng, cfg.m, cfg.s, cfg.rank);
  const Matrix d1 = detail::low_rank(rng, cfg.m, cfg.s, cfg.rank);
  const Matrix d2 = detail::low_rank(rng, cfg.m, cfg.s, cfg.rank);
  SignalSequence xs;
  for (std::size_t i = 0; i < cfg.n_signals; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(cfg.n_signals);
    xs.push_back(center(Ensemble(base + cfg.drift * (std::cos(phase) * d1 + std::sin(phase) * d2))));
  }
  return xs;
}

/// X_i o U_i with U_i entrywise uniform on [low, high], before centering.
inline std::vector<Matrix> raw_observations(const SignalSequence& xs, const ExperimentConfig& cfg) {
  auto rng = detail::stream(cfg.seed, 2);
  std::uniform_real_distribution<double> unif(cfg.noise.low, cfg.noise.high);
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Matrix u(xs[i].components(), xs[i].realizations());
    for (Index r = 0; r < u.rows(); ++r) {
      for (Index c = 0; c < u.cols(); ++c) u(r, c) = cfg.noise.low == cfg.noise.high ? cfg.noise.low : unif(rng);
    }
    out.push_back(xs[i].data().cwiseProduct(u));
  }
  return out;
}

/// Y_i = X_i o U_i, centered.
inline SignalSequence gen_observations(const SignalSequence& xs, const ExperimentConfig& cfg) {
  SignalSequence ys;
  for (auto& y : raw_observations(xs, cfg)) ys.push_back(ensure_centered(std::move(y)));
  return ys;
}

struct BenchData {
  SignalSequence xs;
  SignalSequence ys;
};

inline BenchData generate_data(const ExperimentConfig& cfg) {
  BenchData d;
  d.xs = gen_reference_sequence(cfg);
  d.ys = gen_observations(d.xs, cfg);
  return d;
}

// ---- filters -------------------------------------------------------------

/// Q_j(Y_i) = Y_{i-(p-j)} for j = 1..p: the oldest lag comes first.
inline std::vector<QOperatorSpec> lag_operators(std::size_t p) {
  std::vector<QOperatorSpec> q;
  for (std::size_t j = 0; j < p; ++j) q.push_back(QOperatorSpec::lag(p - 1 - j));
  return q;
}

inline TrainingSet training_set(const BenchData& data, const std::vector<std::size_t>& nodes) {
  TrainingSet t;
  for (std::size_t k : nodes) t.s_x.push_back(data.xs.at(k));
  t.s_y_context = data.ys;
  t.s_y_indices = nodes;
  return t;
}

inline std::string method_name(std::size_t p) { return "interp_p" + std::to_string(p); }

inline FilterModel fit_filter(const ExperimentConfig& cfg, const BenchData& data, std::size_t p) {
  FitOptions opt;
  opt.residual_tolerance = cfg.residual_tolerance;
  opt.tol = cfg.tolerance();
  return fit(training_set(data, cfg.nodes_for(p)), lag_operators(p), std::nullopt, opt);
}

inline std::vector<FilterModel> fit_filters(const ExperimentConfig& cfg, const BenchData& data) {
  std::vector<FilterModel> models;
  for (std::size_t p : cfg.p_values) models.push_back(fit_filter(cfg, data, p));
  return models;
}

// ---- evaluation & report ---------------------------------------------------

struct ErrorRow {
  std::string method;
  std::size_t signal_index = 0;
  double err_e = 0.0;  // (1/s) ||X - X_hat||_F^2
  double err_f = 0.0;  // ||X - X_hat||_F^2
  /// Node of the row's filter; for the per-pair baselines, membership in s_indices.
  bool is_node = false;
};

struct MethodSummary {
  std::string method;
  double mean_err_e = 0.0;        // all positions
  double mean_err_e_nodes = 0.0;  // interpolation nodes only (NaN if none)
  double mean_err_e_off_nodes = 0.0;
  double mean_err_f = 0.0;
};

struct FilterDiagnostics {
  std::size_t p = 0;
  std::vector<std::size_t> nodes;
  std::vector<double> interp_residuals;
  std::vector<double> residual_scales;
  std::vector<std::size_t> degenerate_terms;
  /// Empty under fixed_r: the frozen cascade leaves the terms non-orthogonal.
  std::vector<Corollary1Result> corollary;
  double max_rel_residual = 0.0;
  double max_rel_gap = 0.0;
};

struct RunReport {
  std::vector<ErrorRow> rows;
  std::vector<MethodSummary> summaries;
  std::vector<FilterDiagnostics> filters;
  std::map<std::string, double> timings_s;

  const MethodSummary& summary(const std::string& method) const {
    for (const auto& s : summaries) {
      if (s.method == method) return s;
    }
    throw InvalidInput("RunReport: no method " + method);
  }
};

namespace detail {

inline MethodSummary summarize(const std::string& method, const std::vector<ErrorRow>& rows) {
  MethodSummary s;
  s.method = method;
  double all = 0.0, nodes = 0.0, off = 0.0, frob = 0.0;
  std::size_t n_all = 0, n_nodes = 0, n_off = 0;
  for (const auto& r : rows) {
    if (r.method != method) continue;
    all += r.err_e;
    frob += r.err_f;
    ++n_all;
    if (r.is_node) {
      nodes += r.err_e;
      ++n_nodes;
    } else {
      off += r.err_e;
      ++n_off;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.mean_err_e = n_all ? all / n_all : nan;
  s.mean_err_f = n_all ? frob / n_all : nan;
  s.mean_err_e_nodes = n_nodes ? nodes / n_nodes : nan;
  s.mean_err_e_off_nodes = n_off ? off / n_off : nan;
  return s;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Per-pair baseline delta: the configured value, else 100 n / trace(E[yy]).
inline double rls_delta(const ExperimentConfig& cfg, const Ensemble& y) {
  if (cfg.rls.delta) return *cfg.rls.delta;
  const double scale = est_cov(y, y).matrix.trace() / static_cast<double>(y.components());
  return scale > 0.0 ? 100.0 / scale : 1.0;
}

/// Evaluates fitted interpolation filters (and, if enabled, the per-pair
/// baselines) at every position of the sequence.
inline RunReport evaluate(const ExperimentConfig& cfg, const BenchData& data, const std::vector<FilterModel>& models) {
  RunReport report;
  const std::size_t n = data.xs.size();
  const FilterContext ctx{data.ys, 0};
  const double s = static_cast<double>(data.xs.common_s());

  for (const auto& model : models) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string name = method_name(model.p);
    const std::vector<std::size_t>& nodes = model.meta.node_indices;
    std::vector<ErrorRow> rows(n);
    parallel_for(n, [&](std::size_t i) {
      const double e = empirical_error(data.xs[i], apply(model, ctx, i, cfg.apply_mode()));
      rows[i] = {name, i, e, e * s, std::find(nodes.begin(), nodes.end(), i) != nodes.end()};
    });
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());

    FilterDiagnostics diag;
    diag.p = model.p;
    diag.nodes = nodes;
    diag.degenerate_terms = model.meta.degenerate_terms;
    if (nodes.size() == model.p) {
      TrainingSet train = training_set(data, nodes);
      diag.interp_residuals = interp_residual(model, train);
      for (std::size_t k = 0; k < model.p; ++k) {
        const double scale = est_cov(train.s_x[k], filter_terms(model, ctx, nodes[k])[k]).matrix.norm();
        diag.residual_scales.push_back(scale);
        if (scale > 0.0) diag.max_rel_residual = std::max(diag.max_rel_residual, diag.interp_residuals[k] / scale);
        if (cfg.fixed_r) continue;
        diag.corollary.push_back(corollary1_check(model, train, k));
        const auto& c = diag.corollary.back();
        if (c.lhs > 0.0) diag.max_rel_gap = std::max(diag.max_rel_gap, c.gap / c.lhs);
      }
      if (cfg.fixed_r) diag.max_rel_gap = std::numeric_limits<double>::quiet_NaN();
    }
    report.filters.push_back(std::move(diag));
    report.summaries.push_back(detail::summarize(name, report.rows));
    report.timings_s["eval_" + name] = detail::seconds_since(t0);
  }

  if (cfg.baselines) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ErrorRow> wiener(n), rls(n);
    parallel_for(n, [&](std::size_t i) {
      const Ensemble& x = data.xs[i];
      const Ensemble& y = data.ys[i];
      const double ew = empirical_error(x, wiener_apply(wiener_fit(x, y, cfg.tolerance()), y));
      const bool node = std::find(cfg.s_indices.begin(), cfg.s_indices.end(), i) != cfg.s_indices.end();
      wiener[i] = {"wiener", i, ew, ew * s, node};
      const double er = empirical_error(x, rls_apply(rls_fit(x, y, cfg.rls.lambda, rls_delta(cfg, y)), y));
      rls[i] = {"rls", i, er, er * s, node};
    });
    report.rows.insert(report.rows.end(), wiener.begin(), wiener.end());
    report.rows.insert(report.rows.end(), rls.begin(), rls.end());
    report.summaries.push_back(detail::summarize("wiener", report.rows));
    report.summaries.push_back(detail::summarize("rls", report.rows));
    report.timings_s["eval_baselines"] = detail::seconds_since(t0);
  }
  return report;
}

struct BenchRun {
  BenchData data;
  std::vector<FilterModel> models;
  RunReport report;
};

/// Generates, fits and evaluates, keeping the data and models for output.
inline BenchRun run_benchmark_full(const ExperimentConfig& cfg) {
  cfg.validate();
  BenchRun run;
  const auto t0 = std::chrono::steady_clock::now();
  run.data = generate_data(cfg);
  const double t_gen = detail::seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  run.models = fit_filters(cfg, run.data);
  const double t_fit = detail::seconds_since(t1);
  run.report = evaluate(cfg, run.data, run.models);
  run.report.timings_s["generate"] = t_gen;
  run.report.timings_s["fit"] = t_fit;
  run.report.timings_s["total"] = detail::seconds_since(t0);
  return run;
}

inline RunReport run_benchmark(const ExperimentConfig& cfg) { return run_benchmark_full(cfg).report; }

// ---- output ----------------------------------------------------------------

/// method,signal_index,err_E,err_F,is_node with round-trip precision.
inline std::string report_csv(const RunReport& report) {
  std::string out = "method,signal_index,err_E,err_F,is_node\n";
  for (const auto& r : report.rows) {
    out += r.method + "," + std::to_string(r.signal_index) + "," + io::format_double(r.err_e) + "," +
           io::format_double(r.err_f) + "," + (r.is_node ? "1" : "0") + "\n";
  }
  return out;
}

namespace detail {
inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }
}  // namespace detail

inline nlohmann::json report_summary(const RunReport& report, const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["config"] = config_to_json(cfg);
  j["methods"] = nlohmann::json::array();
  for (const auto& s : report.summaries) {
    j["methods"].push_back({{"method", s.method},
                            {"mean_err_E", detail::number_or_null(s.mean_err_e)},
                            {"mean_err_E_nodes", detail::number_or_null(s.mean_err_e_nodes)},
                            {"mean_err_E_off_nodes", detail::number_or_null(s.mean_err_e_off_nodes)},
                            {"mean_err_F", detail::number_or_null(s.mean_err_f)}});
  }
  j["filters"] = nlohmann::json::array();
  for (const auto& f : report.filters) {
    nlohmann::json cor = nlohmann::json::array();
    for (const auto& c : f.corollary) {
      cor.push_back({{"lhs", c.lhs}, {"rhs", c.rhs}, {"rhs_literal", c.rhs_literal}, {"gap", c.gap}});
    }
    j["filters"].push_back({{"method", method_name(f.p)},
                            {"p", f.p},
                            {"nodes", f.nodes},
                            {"interp_residuals", f.interp_residuals},
                            {"residual_scales", f.residual_scales},
                            {"max_rel_residual", f.max_rel_residual},
                            {"degenerate_terms", f.degenerate_terms},
                            {"corollary1", cor},
                            {"max_rel_corollary1_gap", detail::number_or_null(f.max_rel_gap)}});
  }
  j["timings_s"] = report.timings_s;
  return j;
}

inline void write_report(const std::filesystem::path& dir, const RunReport& report, const ExperimentConfig& cfg) {
  io::write_file(dir / "report.csv", report_csv(report));
  io::write_file(dir / "summary.json", report_summary(report, cfg).dump(2) + "\n");
}

inline void write_models(const std::filesystem::path& dir, const std::vector<FilterModel>& models) {
  for (const auto& m : models) io::write_file(dir / ("model_" + method_name(m.p) + ".json"), save_model(m));
}

/// Per-pair baseline matrices, one file per method.
inline void write_baseline_models(const std::filesystem::path& dir, const ExperimentConfig& cfg, const BenchData& data) {
  nlohmann::json wiener = nlohmann::json::array(), rls = nlohmann::json::array();
  for (std::size_t i = 0; i < data.xs.size(); ++i) {
    wiener.push_back(matrix_to_json(wiener_fit(data.xs[i], data.ys[i], cfg.tolerance()).t));
    rls.push_back(matrix_to_json(rls_fit(data.xs[i], data.ys[i], cfg.rls.lambda, rls_delta(cfg, data.ys[i])).weights));
  }
  io::write_file(dir / "model_wiener.json", nlohmann::json({{"version", 1}, {"method", "wiener"}, {"t_mats", wiener}}).dump());
  io::write_file(dir / "model_rls.json", nlohmann::json({{"version", 1}, {"method", "rls"}, {"t_mats", rls}}).dump());
}

}  // namespace iflt::bench
