#pragma once

// Command-line front end: gen, fit, apply, eval, bench, epsnet.
// Exit codes: 0 success, 1 user error (flags, config, files), 2 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iflt/bench.hpp"
#include "iflt/error_analysis.hpp"
#include "iflt/errors.hpp"
#include "iflt/io.hpp"
#include "iflt/model_io.hpp"

namespace iflt::cli {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool fixed_r = false;
  std::optional<double> rls_lambda;
  std::optional<double> rls_delta;
};

inline void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)");
  cmd->add_option("--seed", o.seed, "overrides the config seed");
  cmd->add_option("--out", o.out, "output directory or file");
  cmd->add_flag("--fixed-r", o.fixed_r, "apply the cascade frozen at training time");
  cmd->add_option("--rls-lambda", o.rls_lambda, "RLS forgetting factor");
  cmd->add_option("--rls-delta", o.rls_delta, "RLS initialisation, P0 = delta I");
}

/// --config if given (it must exist), else <data_dir>/config.json, else defaults;
/// flag overrides come last.
inline bench::ExperimentConfig resolve_config(const CommonOptions& o, const std::string& data_dir = "") {
  nlohmann::json j = nlohmann::json::object();
  fs::path path;
  if (!o.config.empty()) {
    path = o.config;
    if (!fs::exists(path)) throw ConfigError("--config", "file not found: " + o.config);
  } else if (!data_dir.empty() && fs::exists(fs::path(data_dir) / "config.json")) {
    path = fs::path(data_dir) / "config.json";
  }
  if (!path.empty()) {
    try {
      j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
  }
  bench::ExperimentConfig cfg = bench::config_from_json(j);
  if (o.seed) cfg.seed = *o.seed;
  if (o.fixed_r) cfg.fixed_r = true;
  if (o.rls_lambda) cfg.rls.lambda = *o.rls_lambda;
  if (o.rls_delta) cfg.rls.delta = *o.rls_delta;
  cfg.validate();
  return cfg;
}

inline bench::BenchData read_data(const fs::path& dir) {
  return {io::read_sequence(dir / "x.json"), io::read_sequence(dir / "y.json")};
}

inline std::vector<FilterModel> read_models(const fs::path& dir, const bench::ExperimentConfig& cfg) {
  std::vector<FilterModel> models;
  for (std::size_t p : cfg.p_values) {
    models.push_back(load_model(io::read_file(dir / ("model_" + bench::method_name(p) + ".json"))));
  }
  return models;
}

/// Constants for the error bound: given explicitly, or probed on the data
/// (optionally scaled) when the file says {"probe": true, "scale": f}.
inline nlohmann::json bound_report(const nlohmann::json& spec, const bench::ExperimentConfig& cfg,
                                   const bench::BenchData& data, const std::vector<FilterModel>& models) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& model : models) {
    const std::vector<std::size_t>& nodes = model.meta.node_indices;
    const TrainingSet train = bench::training_set(data, nodes);
    std::vector<std::size_t> positions(data.xs.size());
    for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;

    ProbedConstants c;
    if (spec.value("probe", false)) {
      c = probe_constants(model, train, data.xs, positions, cfg.apply_mode()).scaled(spec.value("scale", 1.0));
    } else {
      try {
        c.eps_x = spec.at("eps_x").get<double>();
        c.eps_y = spec.at("eps_y").get<double>();
        c.lambda_e = spec.at("lambda_e").get<double>();
        c.lambda_q = spec.at("lambda_q").get<double>();
        c.r_hat = spec.at("r_hat").get<std::vector<double>>();
        c.x_energy = spec.at("x_energy").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("--bounds", e.what());
      }
    }
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i : nodes) {
      const BoundEvaluation b = evaluate_bound_at(model, train, i, data.xs[i], c, cfg.apply_mode());
      rows.push_back({{"signal_index", i}, {"measured", b.measured}, {"j0", b.j0}, {"bound", b.terms.total}});
    }
    out.push_back({{"method", bench::method_name(model.p)},
                   {"constants",
                    {{"eps_x", c.eps_x}, {"eps_y", c.eps_y}, {"lambda_e", c.lambda_e}, {"lambda_q", c.lambda_q},
                     {"r_hat", c.r_hat}, {"x_energy", c.x_energy}}},
                   {"nodes", rows}});
  }
  return out;
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"Interpolation filters for signal sets, with Wiener and RLS comparators"};
  app.require_subcommand(1);

  CommonOptions gen_o, fit_o, apply_o, eval_o, bench_o, net_o;
  std::string fit_data, apply_data, apply_model, eval_data, eval_models, eval_bounds, net_data;
  std::size_t apply_index = 0;
  double net_eps = 0.0;

  auto* gen = app.add_subcommand("gen", "generate reference and observation sequences");
  add_common(gen, gen_o);

  auto* fitc = app.add_subcommand("fit", "fit the interpolation filters on generated data");
  add_common(fitc, fit_o);
  fitc->add_option("--data", fit_data, "directory written by gen")->required();

  auto* applyc = app.add_subcommand("apply", "estimate one reference signal with a fitted model");
  add_common(applyc, apply_o);
  applyc->add_option("--data", apply_data, "directory written by gen")->required();
  applyc->add_option("--model", apply_model, "model JSON written by fit")->required();
  applyc->add_option("--index", apply_index, "zero-based sequence position")->required();

  auto* evalc = app.add_subcommand("eval", "evaluate fitted models and baselines");
  add_common(evalc, eval_o);
  evalc->add_option("--data", eval_data, "directory written by gen")->required();
  evalc->add_option("--models", eval_models, "directory written by fit (default: --data)");
  evalc->add_option("--bounds", eval_bounds, "error-bound constants (JSON)");

  auto* benchc = app.add_subcommand("bench", "generate, fit and evaluate in one run");
  add_common(benchc, bench_o);

  auto* net = app.add_subcommand("epsnet", "greedy eps-net over the reference sequence");
  add_common(net, net_o);
  net->add_option("--data", net_data, "directory written by gen")->required();
  net->add_option("--eps", net_eps, "covering radius in the squared empirical norm")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      const auto cfg = resolve_config(gen_o);
      const auto data = bench::generate_data(cfg);
      const fs::path dir = gen_o.out;
      io::write_sequence(dir / "x.json", data.xs, "x");
      io::write_sequence(dir / "y.json", data.ys, "y");
      io::write_file(dir / "config.json", bench::config_to_json(cfg).dump(2) + "\n");
    } else if (fitc->parsed()) {
      const auto cfg = resolve_config(fit_o, fit_data);
      const auto data = read_data(fit_data);
      const fs::path dir = fit_o.out;
      bench::write_models(dir, bench::fit_filters(cfg, data));
      if (cfg.baselines) bench::write_baseline_models(dir, cfg, data);
    } else if (applyc->parsed()) {
      const auto cfg = resolve_config(apply_o, apply_data);
      const auto data = read_data(apply_data);
      const FilterModel model = load_model(io::read_file(apply_model));
      if (apply_index >= data.ys.size()) throw InvalidInput("--index outside the sequence");
      const Ensemble est = apply(model, FilterContext{data.ys, 0}, apply_index, cfg.apply_mode());
      io::write_ensemble(apply_o.out, est);
    } else if (evalc->parsed()) {
      const auto cfg = resolve_config(eval_o, eval_data);
      const auto data = read_data(eval_data);
      const auto models = read_models(eval_models.empty() ? eval_data : eval_models, cfg);
      const auto report = bench::evaluate(cfg, data, models);
      bench::write_report(eval_o.out, report, cfg);
      if (!eval_bounds.empty()) {
        nlohmann::json spec;
        try {
          spec = nlohmann::json::parse(io::read_file(eval_bounds));
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError("--bounds", e.what());
        }
        io::write_file(fs::path(eval_o.out) / "bounds.json", bound_report(spec, cfg, data, models).dump(2) + "\n");
      }
    } else if (benchc->parsed()) {
      const auto cfg = resolve_config(bench_o);
      const auto run = bench::run_benchmark_full(cfg);
      const fs::path dir = bench_o.out;
      bench::write_report(dir, run.report, cfg);
      bench::write_models(dir, run.models);
      if (cfg.baselines) bench::write_baseline_models(dir, cfg, run.data);
      for (const auto& s : run.report.summaries) {
        std::cout << s.method << " mean_err_E=" << io::format_double(s.mean_err_e) << "\n";
      }
    } else if (net->parsed()) {
      const auto data = read_data(net_data);
      const EpsNet result = greedy_eps_net(data.xs.items(), net_eps);
      nlohmann::json j = {{"eps", net_eps}, {"centers", result.center_indices}, {"achieved_eps", result.achieved_eps}};
      io::write_file(net_o.out == "out" ? fs::path("out") / "epsnet.json" : fs::path(net_o.out), j.dump(2) + "\n");
      std::cout << j.dump() << "\n";
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NotPSD& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace iflt::cli

inline int cli_main(int argc, const char* const* argv) { return iflt::cli::run(argc, argv); }
