#pragma once

// Error analysis for interpolation filters: the optimal p-term error, the
// exact error decomposition at training nodes, the a-priori bound built
// from net radii and Lipschitz constants, and greedy eps-net selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "iflt/errors.hpp"
#include "iflt/interp_filter.hpp"
#include "iflt/linalg.hpp"
#include "iflt/orthogonalizer.hpp"
#include "iflt/signal.hpp"

namespace iflt {

/// (1/s) ||X - X_hat||_F^2.
inline double empirical_error(const Ensemble& x, const Ensemble& x_hat) {
  Ensemble::check_same_shape(x, x_hat, "empirical_error");
  return (x.data() - x_hat.data()).squaredNorm() / static_cast<double>(x.realizations());
}

/// ||E[x w] (E[w w]^{1/2})^+||_F^2: the error reduction one orthogonal term buys.
inline double optimal_term(const Ensemble& x, const Ensemble& w, const SpectralTolerance& tol = {}) {
  const Matrix root_pinv = pseudo_inverse(sym_sqrt(est_cov(w, w).matrix), tol);
  return (est_cov(x, w).matrix * root_pinv).squaredNorm();
}

/// Smallest error of any p-term filter sum_j T_j w_j on mutually orthogonal w's:
/// trace E[xx] - sum_j ||E[x w_j] (E[w_j w_j]^{1/2})^+||^2.
inline double optimal_error(const Ensemble& x, const std::vector<Ensemble>& ws, const SpectralTolerance& tol = {}) {
  if (ws.empty()) throw InvalidInput("optimal_error: need at least one term");
  if (cross_cov_residual(ws) > 1e-8 * covariance_scale(ws)) {
    throw InvalidInput("optimal_error: terms are not mutually orthogonal");
  }
  double err = est_cov(x, x).matrix.trace();
  for (const auto& w : ws) err -= optimal_term(x, w, tol);
  return err;
}

struct Corollary1Result {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Same decomposition with E[x_j w_j] taken literally on the evaluation
  /// terms; agrees with rhs only when the node-j and node-k cascades coincide.
  double rhs_literal = 0.0;
  double gap = 0.0;
};

/// Error of the filter at training node k against its exact decomposition
///   J0(x_k, {w_j}) + sum_j ||[T_j E[w_j w_j] - E[x_k w_j]] (E[w_j w_j]^{1/2})^+||^2,
/// where T_j E[w_j w_j] is the cross-covariance the filter's T_j reproduces on
/// the terms w_j seen at node k.
inline Corollary1Result corollary1_check(const FilterModel& model, const TrainingSet& train, std::size_t k,
                                         ApplyMode mode = ApplyMode::PerSignal) {
  train.validate();
  if (k >= model.p || train.p() != model.p) throw InvalidInput("corollary1_check: node index out of range");
  const SpectralTolerance tol = model.tolerance();
  const FilterContext ctx{train.s_y_context, 0};
  const std::size_t pos = train.s_y_indices[k];
  const Ensemble& x = train.s_x[k];

  Corollary1Result out;
  out.lhs = empirical_error(x, apply(model, ctx, pos, mode));

  const std::vector<Ensemble> ws = filter_terms(model, ctx, pos, mode);
  const double j0 = optimal_error(x, ws, tol);
  out.rhs = j0;
  out.rhs_literal = j0;
  for (std::size_t j = 0; j < model.p; ++j) {
    const Matrix cww = est_cov(ws[j], ws[j]).matrix;
    const Matrix root_pinv = pseudo_inverse(sym_sqrt(cww), tol);
    const Matrix cxk = est_cov(x, ws[j]).matrix;
    out.rhs += ((model.t_mats[j] * cww - cxk) * root_pinv).squaredNorm();
    out.rhs_literal += ((est_cov(train.s_x[j], ws[j]).matrix - cxk) * root_pinv).squaredNorm();
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

struct ErrorBoundInputs {
  double eps_x = 0.0;
  double eps_y = 0.0;
  double lambda_e = 0.0;
  double lambda_q = 0.0;
  std::vector<double> r_hat;
  /// ||x||_E^2 of the target (or an upper surrogate such as the pool maximum).
  double x_energy = 0.0;
  /// Free terms A_k; empty means all zero.
  std::vector<Matrix> a_mats;
  /// E[w_k w_k] and E[x_k w_k] on the evaluation terms.
  std::vector<Matrix> cov_ww;
  std::vector<Matrix> cov_xkw;

  std::size_t p() const noexcept { return cov_ww.size(); }

  void validate() const {
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(std::string("bound input ") + name + " must be finite and >= 0");
    };
    nonneg(eps_x, "eps_x");
    nonneg(eps_y, "eps_y");
    nonneg(lambda_e, "lambda_e");
    nonneg(lambda_q, "lambda_q");
    nonneg(x_energy, "x_energy");
    for (double r : r_hat) nonneg(r, "r_hat");
    if (r_hat.size() != p() || cov_xkw.size() != p()) throw InvalidInput("bound inputs: per-term lists differ in length");
    if (!a_mats.empty() && a_mats.size() != p()) throw InvalidInput("bound inputs: need p free-term matrices");
  }
};

/// The bound split into its named parts.
struct Theorem3Terms {
  double j0 = 0.0;
  std::vector<double> e_k;     // ||(E[w_k w_k]^{1/2})^+||^2
  std::vector<double> d_k;     // lambda_E lambda_Q R_k [||x||^2 E_k + ||E[x_k w_k]||^2] ||E^{1/2}||^2
  std::vector<double> eps_x_terms;
  std::vector<double> eps_y_terms;
  double c = 0.0;              // sum_k ||A_k (I - E E^+)||^2 ||E^{1/2}||^2
  double total = 0.0;
};

inline Theorem3Terms theorem3_terms(double j0, const ErrorBoundInputs& in, const std::vector<double>& w_energies,
                                    const SpectralTolerance& tol = {}) {
  in.validate();
  if (!std::isfinite(j0)) throw InvalidInput("theorem3_bound: j0 must be finite");
  if (w_energies.size() != in.p()) throw InvalidInput("theorem3_bound: need one energy per term");
  for (double e : w_energies) {
    if (!(e >= 0.0)) throw InvalidInput("theorem3_bound: energies must be >= 0");
  }
  Theorem3Terms t;
  t.j0 = j0;
  t.total = j0;
  for (std::size_t k = 0; k < in.p(); ++k) {
    const Matrix& cww = in.cov_ww[k];
    const Matrix root = sym_sqrt(cww);
    const double root_sq = root.squaredNorm();
    const double e_k = pseudo_inverse(root, tol).squaredNorm();
    const double d_k = in.lambda_e * in.lambda_q * in.r_hat[k] *
                       (in.x_energy * e_k + in.cov_xkw[k].squaredNorm()) * root_sq;
    t.e_k.push_back(e_k);
    t.d_k.push_back(d_k);
    t.eps_x_terms.push_back(in.eps_x * w_energies[k] * e_k);
    t.eps_y_terms.push_back(in.eps_y * d_k);
    t.total += t.eps_x_terms.back() + t.eps_y_terms.back();
    if (!in.a_mats.empty()) {
      const Matrix proj = cww * pseudo_inverse(cww, tol);
      const Matrix resid = in.a_mats[k] * (Matrix::Identity(cww.rows(), cww.cols()) - proj);
      t.c += resid.squaredNorm() * root_sq;
    }
  }
  t.total += t.c;
  return t;
}

inline double theorem3_bound(double j0, const ErrorBoundInputs& in, const std::vector<double>& w_energies,
                             const SpectralTolerance& tol = {}) {
  return theorem3_terms(j0, in, w_energies, tol).total;
}

/// Lipschitz constants and net radii measured on sampled pairs. Each value
/// is the largest observed ratio, hence only a lower bound on the true constant.
struct ProbedConstants {
  double eps_x = 0.0;
  double eps_y = 0.0;
  double lambda_e = 0.0;
  double lambda_q = 0.0;
  std::vector<double> r_hat;
  double x_energy = 0.0;

  ProbedConstants scaled(double factor) const {
    ProbedConstants c = *this;
    c.eps_x *= factor;
    c.eps_y *= factor;
    c.lambda_e *= factor;
    c.lambda_q *= factor;
    for (double& r : c.r_hat) r *= factor;
    return c;
  }
};

/// Probes the bound's constants over the given evaluation positions.
/// `references[i]` is the reference signal at absolute position i, aligned
/// with train.s_y_context.
///
/// eps_x (eps_y) is max over i and k of ||x_i - x_k||_E^2 (||y_i - y_k||_E^2):
/// the bound charges every term k with the distance to node k.
inline ProbedConstants probe_constants(const FilterModel& model, const TrainingSet& train,
                                       const SignalSequence& references, const std::vector<std::size_t>& positions,
                                       ApplyMode mode = ApplyMode::PerSignal) {
  train.validate();
  const SpectralTolerance tol = model.tolerance();
  const FilterContext ctx{train.s_y_context, 0};
  const std::size_t p = model.p;

  std::vector<std::vector<Ensemble>> node_vs, node_ws;
  std::vector<Matrix> node_pinv;
  for (std::size_t k = 0; k < p; ++k) {
    node_vs.push_back(derived_observations(model.q_specs, ctx, train.s_y_indices[k]));
    node_ws.push_back(filter_terms(model, ctx, train.s_y_indices[k], mode));
    node_pinv.push_back(pseudo_inverse(est_cov(node_ws[k][k], node_ws[k][k]).matrix, tol));
  }

  ProbedConstants c;
  c.r_hat.assign(p, 0.0);
  for (std::size_t i = 0; i < references.size(); ++i) c.x_energy = std::max(c.x_energy, energy(references[i]));

  for (std::size_t i : positions) {
    const Ensemble& x = references.at(i);
    const Ensemble& y = train.s_y_context.at(i);
    const std::vector<Ensemble> vs = derived_observations(model.q_specs, ctx, i);
    const std::vector<Ensemble> ws = filter_terms(model, ctx, i, mode);
    for (std::size_t k = 0; k < p; ++k) {
      c.eps_x = std::max(c.eps_x, empirical_error(x, train.s_x[k]));
      const double dy = empirical_error(y, train.s_y_context[train.s_y_indices[k]]);
      c.eps_y = std::max(c.eps_y, dy);
      const double dv = empirical_error(vs[k], node_vs[k][k]);
      const double dw = empirical_error(ws[k], node_ws[k][k]);
      if (dy > 0.0) c.lambda_q = std::max(c.lambda_q, dv / dy);
      if (dv > 0.0) c.r_hat[k] = std::max(c.r_hat[k], dw / dv);
      if (dw > 0.0) {
        const Matrix dpinv = node_pinv[k] - pseudo_inverse(est_cov(ws[k], ws[k]).matrix, tol);
        c.lambda_e = std::max(c.lambda_e, dpinv.squaredNorm() / dw);
      }
    }
  }
  return c;
}

struct BoundEvaluation {
  double measured = 0.0;
  double j0 = 0.0;
  Theorem3Terms terms;
};

/// Builds the bound inputs from the evaluation terms at position i and
/// evaluates measured error, J0 and the bound side by side.
inline BoundEvaluation evaluate_bound_at(const FilterModel& model, const TrainingSet& train, std::size_t i,
                                         const Ensemble& x, const ProbedConstants& constants,
                                         ApplyMode mode = ApplyMode::PerSignal) {
  const SpectralTolerance tol = model.tolerance();
  const FilterContext ctx{train.s_y_context, 0};
  const std::vector<Ensemble> ws = filter_terms(model, ctx, i, mode);

  ErrorBoundInputs in;
  in.eps_x = constants.eps_x;
  in.eps_y = constants.eps_y;
  in.lambda_e = constants.lambda_e;
  in.lambda_q = constants.lambda_q;
  in.r_hat = constants.r_hat;
  in.x_energy = constants.x_energy;
  if (model.a_mats) in.a_mats = *model.a_mats;
  std::vector<double> w_energies;
  for (std::size_t k = 0; k < model.p; ++k) {
    in.cov_ww.push_back(est_cov(ws[k], ws[k]).matrix);
    in.cov_xkw.push_back(est_cov(train.s_x[k], ws[k]).matrix);
    w_energies.push_back(energy(ws[k]));
  }

  BoundEvaluation out;
  out.measured = empirical_error(x, apply(model, ctx, i, mode));
  out.j0 = optimal_error(x, ws, tol);
  out.terms = theorem3_terms(out.j0, in, w_energies, tol);
  return out;
}

struct EpsNet {
  std::vector<std::size_t> center_indices;
  double achieved_eps = 0.0;
};

/// Greedy cover under the squared empirical distance (1/s)||A - B||_F^2:
/// scanning in order, every candidate not yet within eps of a center becomes one.
inline EpsNet greedy_eps_net(const std::vector<Ensemble>& pool, double eps) {
  if (pool.empty()) throw InvalidInput("greedy_eps_net: pool is empty");
  if (!(eps > 0.0)) throw InvalidInput("greedy_eps_net: eps must be > 0");
  for (const auto& c : pool) Ensemble::check_same_shape(c, pool.front(), "greedy_eps_net");

  EpsNet net;
  std::vector<double> nearest(pool.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (nearest[i] <= eps) continue;
    net.center_indices.push_back(i);
    for (std::size_t j = 0; j < pool.size(); ++j) {
      nearest[j] = std::min(nearest[j], empirical_error(pool[j], pool[i]));
    }
  }
  net.achieved_eps = *std::max_element(nearest.begin(), nearest.end());
  return net;
}

/// Signal-space radius induced by a parameter-space net of radius eps_delta
/// for a family with ||x(a) - x(b)||_E^2 <= lambda_x ||a - b||^2.
inline double param_to_signal_eps(double eps_delta, double lambda_x) {
  if (!(eps_delta >= 0.0) || !(lambda_x >= 0.0)) throw InvalidInput("param_to_signal_eps: inputs must be >= 0");
  return lambda_x * eps_delta;
}

}  // namespace iflt
