// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "iflt/iflt.hpp"
#include "oracles.hpp"

using namespace iflt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

const bench::BenchData& default_data() {
  static const bench::BenchData data = bench::generate_data(bench::ExperimentConfig{});
  return data;
}

const std::vector<FilterModel>& default_models() {
  static const std::vector<FilterModel> models = bench::fit_filters(bench::ExperimentConfig{}, default_data());
  return models;
}

Outcome penrose_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dim(1, 10);
  double worst = 0.0;
  int deficient = 0;
  for (int t = 0; t < 200; ++t) {
    const Index r = dim(rng), c = dim(rng);
    const Index full = std::min(r, c);
    const Index rank = t % 2 == 0 ? full : std::uniform_int_distribution<Index>(0, full - 1)(rng);
    deficient += rank < full;
    const Matrix a = oracle::random_rank(rng, r, c, rank);
    worst = std::max(worst, oracle::penrose(a, pseudo_inverse(a)).worst());
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 5.0,
          "worst relative residual " + fmt("%.2e", worst) + " over 200 matrices (" + std::to_string(deficient) +
              " rank-deficient), " + fmt("%.2f s", secs)};
}

Outcome orthogonality_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  const std::size_t orders[] = {2, 3, 5};
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t p = orders[t % 3];
    const Index n = 2 + t % 7;
    const Index s = 40 + 5 * (t % 5);
    std::vector<Ensemble> vs;
    const Ensemble common = oracle::random_centered(rng, n, s);
    for (std::size_t j = 0; j < p; ++j) {
      vs.push_back(transform(oracle::gaussian(rng, n, n), common) + oracle::random_centered(rng, n, s));
    }
    const OrthoResult r = orthogonalize(vs);
    worst = std::max(worst, cross_cov_residual(r.ws) / covariance_scale(vs));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-8 && secs < 10.0,
          "worst residual / scale " + fmt("%.2e", worst) + " over 50 ensembles, " + fmt("%.2f s", secs)};
}

Outcome interpolation_property() {
  const auto t0 = std::chrono::steady_clock::now();
  const bench::ExperimentConfig cfg;
  const bench::BenchData data = bench::generate_data(cfg);
  double worst = 0.0;
  for (std::size_t p : cfg.p_values) {
    const TrainingSet train = bench::training_set(data, cfg.nodes_for(p));
    const FilterModel model = fit(train, bench::lag_operators(p));
    const auto rho = interp_residual(model, train);
    for (std::size_t k = 0; k < p; ++k) worst = std::max(worst, rho[k] / model.meta.residual_scales[k]);
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-6 && secs < 10.0,
          "max rho_k relative " + fmt("%.2e", worst) + " for p = 3, 5, " + fmt("%.2f s", secs)};
}

Outcome wiener_reduction() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Index m = 1 + t % 5, n = 1 + (t * 3) % 6, s = 30;
    const Ensemble y = oracle::random_centered(rng, n, s);
    const Ensemble x = transform(oracle::gaussian(rng, m, n), y) + oracle::random_centered(rng, m, s);
    TrainingSet train{{x}, SignalSequence({y}), {0}};
    const FilterModel model = fit(train, {QOperatorSpec::identity()});
    worst = std::max(worst, (model.t_mats[0] - wiener_fit(x, y).t).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-10, "max elementwise difference " + fmt("%.2e", worst) + " over 20 pairs"};
}

Outcome corollary_identity() {
  const bench::ExperimentConfig cfg;
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& model : default_models()) {
    const TrainingSet train = bench::training_set(default_data(), model.meta.node_indices);
    for (std::size_t k = 0; k < model.p; ++k, ++count) {
      const Corollary1Result c = corollary1_check(model, train, k);
      worst = std::max(worst, c.gap / c.lhs);
    }
  }
  return {worst <= 1e-6, "max |lhs - rhs| / lhs " + fmt("%.2e", worst) + " over " + std::to_string(count) + " nodes"};
}

Outcome optimal_error_oracle() {
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t p = 1 + t % 3;
    const Index n = 2 + t % 4, m = 1 + t % 3, s = 50;
    std::vector<Ensemble> vs;
    for (std::size_t j = 0; j < p; ++j) vs.push_back(oracle::random_centered(rng, n, s));
    const std::vector<Ensemble> ws = orthogonalize(vs).ws;
    const Ensemble x = transform(oracle::gaussian(rng, m, n), vs[0]) + oracle::random_centered(rng, m, s);
    Ensemble est = Ensemble::zeros(m, s);
    for (const auto& w : ws) est = est + transform(est_cov(x, w).matrix * pseudo_inverse(est_cov(w, w).matrix), w);
    const double j0 = optimal_error(x, ws);
    worst = std::max(worst, std::abs(j0 - empirical_error(x, est)) / empirical_error(x, est));
  }
  return {worst <= 1e-8, "max relative difference " + fmt("%.2e", worst) + " over 20 instances"};
}

Outcome bound_sanity() {
  const auto& data = default_data();
  std::vector<std::size_t> positions(data.xs.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  double min_margin = std::numeric_limits<double>::infinity();
  double worst_monotone = 0.0, worst_limit = 0.0;
  bool covers = true, monotone = true;
  for (const auto& model : default_models()) {
    const TrainingSet train = bench::training_set(data, model.meta.node_indices);
    const ProbedConstants c = probe_constants(model, train, data.xs, positions).scaled(10.0);
    for (std::size_t i : model.meta.node_indices) {
      const BoundEvaluation b = evaluate_bound_at(model, train, i, data.xs[i], c);
      covers = covers && b.terms.total >= b.measured;
      min_margin = std::min(min_margin, b.terms.total / b.measured);
      double previous = std::numeric_limits<double>::infinity();
      for (double f : {1.0, 1e-1, 1e-2, 1e-3, 0.0}) {
        ProbedConstants g = c;
        g.eps_x *= f;
        g.eps_y *= f;
        const double bound = evaluate_bound_at(model, train, i, data.xs[i], g).terms.total;
        const double rise = (bound - previous) / b.j0;
        if (rise > 1e-12) monotone = false;
        if (std::isfinite(rise)) worst_monotone = std::max(worst_monotone, rise);
        previous = bound;
      }
      worst_limit = std::max(worst_limit, std::abs(previous - b.j0) / b.j0);
    }
  }
  const bool pass = covers && monotone && worst_limit <= 1e-12;
  return {pass, "min bound / measured " + fmt("%.3g", min_margin) + ", max rise along grid " +
                    fmt("%.1e", worst_monotone) + ", |bound(0) - j0| / j0 " + fmt("%.1e", worst_limit)};
}

Outcome order_trend() {
  int wins = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    bench::ExperimentConfig cfg;
    cfg.seed = seed;
    cfg.baselines = false;
    const bench::RunReport r = bench::run_benchmark(cfg);
    wins += r.summary("interp_p5").mean_err_e_off_nodes <= r.summary("interp_p3").mean_err_e_off_nodes;

    bench::ExperimentConfig small = cfg;
    small.s = 64;
    small.baselines = true;
    const auto t0 = std::chrono::steady_clock::now();
    (void)bench::run_benchmark(small);
    slowest = std::max(slowest, seconds_since(t0));
  }
  return {wins >= 16 && slowest < 60.0, "F(5) <= F(3) in " + std::to_string(wins) +
                                            "/20 seeds; slowest full run at s = 64 " + fmt("%.2f s", slowest)};
}

Outcome rls_oracle() {
  std::mt19937_64 rng(909);
  const Index n = 16, m = 8, s = 400;
  const Ensemble y = oracle::random_centered(rng, n, s);
  const Ensemble x = transform(oracle::gaussian(rng, m, n), y) + 0.1 * oracle::random_centered(rng, m, s);
  const RlsState fitted = rls_fit(x, y, 1.0, 1e8);
  const double rel = rel_diff(fitted.weights, oracle::least_squares(x.data(), y.data()));

  RlsState state = rls_init(n, m, 0.99, 100.0);
  double drift = 0.0;
  for (int step = 0; step < 10000; ++step) {
    const Vector col = oracle::gaussian(rng, n, 1);
    rls_update(state, col, oracle::gaussian(rng, m, 1));
    const Matrix& p = state.p_inv_corr;
    drift = std::max(drift, (p - p.transpose()).norm() / p.norm());
  }
  return {rel <= 1e-4 && drift <= 1e-8,
          "relative distance to least squares " + fmt("%.2e", rel) + ", P asymmetry " + fmt("%.1e", drift)};
}

Outcome eps_net() {
  std::mt19937_64 rng(1010);
  bool all_cover = true;
  int nets = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<Ensemble> pool;
    const int size = 5 + t;
    for (int i = 0; i < size; ++i) pool.push_back(oracle::random_centered(rng, 3, 8));
    for (double eps : {0.25, 1.0, 3.0, 10.0}) {
      const EpsNet net = greedy_eps_net(pool, eps);
      all_cover = all_cover && oracle::covers(pool, net.center_indices, eps);
      ++nets;
    }
  }
  const std::vector<Ensemble> three = {oracle::line_point(0.0), oracle::line_point(0.5), oracle::line_point(1.0)};
  const std::size_t centers = greedy_eps_net(three, 0.3).center_indices.size();
  return {all_cover && centers == 2,
          std::to_string(nets) + " nets verified exhaustively" + (all_cover ? "" : " (cover violated)") +
              "; three-point example gives " + std::to_string(centers) + " centers"};
}

Outcome determinism() {
  const bench::ExperimentConfig cfg;
  const auto dir = std::filesystem::temp_directory_path() / "iflt_acceptance";
  bench::write_report(dir / "a", bench::run_benchmark(cfg), cfg);
  bench::write_report(dir / "b", bench::run_benchmark(cfg), cfg);
  const std::string a = io::read_file(dir / "a" / "report.csv");
  const std::string b = io::read_file(dir / "b" / "report.csv");
  std::filesystem::remove_all(dir);
  return {a == b && !a.empty(), "report.csv " + std::string(a == b ? "identical" : "differs") + " across two runs (" +
                                    std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"penrose conditions", penrose_suite},
      {"orthogonality", orthogonality_suite},
      {"interpolation property", interpolation_property},
      {"wiener reduction", wiener_reduction},
      {"error decomposition at nodes", corollary_identity},
      {"optimal-error oracle", optimal_error_oracle},
      {"error bound sanity", bound_sanity},
      {"order trend", order_trend},
      {"rls oracle", rls_oracle},
      {"eps-net correctness", eps_net},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", c + 1, criteria[c].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
