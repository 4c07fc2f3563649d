#pragma once

// Interpolation filter of order p:
//
//   F(y) = sum_j T_j w_j,   {w_j} = orthogonalize({Q_j(y)}),
//
// with T_j = E[x_j w_jj] E[w_jj w_jj]^+ + A_j (I - E[w_jj w_jj] E[w_jj w_jj]^+),
// where w_jj is the j-th orthogonalized signal at training node j. The
// cascade makes the interpolation conditions
//
//   sum_j T_j E[w_jk w_kk] = E[x_k w_kk],  k = 1..p,
//
// decouple into p independent equations.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "iflt/errors.hpp"
#include "iflt/linalg.hpp"
#include "iflt/orthogonalizer.hpp"
#include "iflt/parallel.hpp"
#include "iflt/signal.hpp"

namespace iflt {

struct FitMeta {
  double residual_tolerance = 1e-6;
  std::optional<double> pinv_relative_cutoff;
  std::size_t samples = 0;
  std::vector<std::size_t> node_indices;
  /// rho_k and the scale ||E[x_k w_kk]||_F it is judged against.
  std::vector<double> interp_residuals;
  std::vector<double> residual_scales;
  /// Terms j whose w_jj deflated to zero; their T_j is the zero block
  /// (plus A_j when given).
  std::vector<std::size_t> degenerate_terms;
};

struct FilterModel {
  std::size_t p = 0;
  std::vector<QOperatorSpec> q_specs;
  std::vector<Matrix> t_mats;
  std::optional<std::vector<Matrix>> a_mats;
  /// K_jl frozen from the cascade at training node j; used by
  /// ApplyMode::FixedR.
  LowerTriangle fixed_k;
  FitMeta meta;

  Index m() const { return t_mats.empty() ? 0 : t_mats.front().rows(); }
  Index n() const { return t_mats.empty() ? 0 : t_mats.front().cols(); }

  SpectralTolerance tolerance() const { return {meta.pinv_relative_cutoff}; }
};

/// Observation window: history[k] is the observation at absolute position
/// first_index + k.
struct FilterContext {
  const SignalSequence& history;
  std::size_t first_index = 0;
};

enum class ApplyMode {
  /// Recompute the cascade from the input's own covariances (default).
  PerSignal,
  /// Reuse the K matrices frozen at training time.
  FixedR,
};

struct FitOptions {
  double residual_tolerance = 1e-6;
  SpectralTolerance tol;
};

/// Q_1..Q_p evaluated at absolute position i.
inline std::vector<Ensemble> derived_observations(const std::vector<QOperatorSpec>& q_specs,
                                                  const FilterContext& ctx, std::size_t i) {
  std::vector<Ensemble> vs;
  vs.reserve(q_specs.size());
  for (const auto& q : q_specs) vs.push_back(apply_q(q, ctx.history, i, ctx.first_index));
  return vs;
}

/// The orthogonalized terms w_1..w_p the model feeds into T_1..T_p at i.
inline std::vector<Ensemble> filter_terms(const FilterModel& model, const FilterContext& ctx, std::size_t i,
                                          ApplyMode mode = ApplyMode::PerSignal) {
  std::vector<Ensemble> vs = derived_observations(model.q_specs, ctx, i);
  if (mode == ApplyMode::PerSignal) return orthogonalize(vs, std::nullopt, model.tolerance()).ws;

  if (model.fixed_k.size() != model.p) throw InvalidInput("apply: model has no frozen K matrices");
  std::vector<Ensemble> ws;
  ws.reserve(vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j) {
    Ensemble w = vs[j];
    for (std::size_t l = 0; l < j; ++l) w = w - transform(model.fixed_k[j][l], ws[l]);
    ws.push_back(std::move(w));
  }
  return ws;
}

/// Fits T_1..T_p. Throws NumericalError if the interpolation residual gate fails.
inline FilterModel fit(const TrainingSet& train, const std::vector<QOperatorSpec>& q_specs,
                       const std::optional<std::vector<Matrix>>& a_mats = std::nullopt,
                       const FitOptions& options = {}) {
  if (train.s_x.empty()) throw InvalidInput("fit: p must be >= 1");
  train.validate();
  const std::size_t p = train.p();
  if (q_specs.size() != p) throw InvalidInput("fit: need exactly p Q-operator specs");
  for (const auto& x : train.s_x) {
    if (!x.centered()) throw InvalidInput("fit: reference signals must be centered");
  }
  const Index m = train.s_x.front().components();
  const Index n = train.s_y_context.common_m();
  if (a_mats) {
    if (a_mats->size() != p) throw InvalidInput("fit: need p free-term matrices");
    for (const auto& a : *a_mats) {
      if (a.rows() != m || a.cols() != n) throw InvalidInput("fit: free-term matrices must be m x n");
      require_finite(a, "fit: free term");
    }
  }

  FilterModel model;
  model.p = p;
  model.q_specs = q_specs;
  model.a_mats = a_mats;
  model.t_mats.resize(p);
  model.fixed_k.resize(p);
  model.meta.residual_tolerance = options.residual_tolerance;
  model.meta.pinv_relative_cutoff = options.tol.relative_cutoff;
  model.meta.samples = static_cast<std::size_t>(train.s_y_context.common_s());
  model.meta.node_indices = train.s_y_indices;

  const FilterContext ctx{train.s_y_context, 0};
  std::vector<char> degenerate(p, 0);
  // Node k only determines T_k, so the p nodes are independent.
  parallel_for(p, [&](std::size_t k) {
    OrthoResult ortho = orthogonalize(derived_observations(q_specs, ctx, train.s_y_indices[k]), std::nullopt,
                                      options.tol);
    const Ensemble& z = ortho.ws[k];
    const Matrix czz = est_cov(z, z).matrix;
    const Matrix czz_pinv = pseudo_inverse(czz, options.tol);
    Matrix t = est_cov(train.s_x[k], z).matrix * czz_pinv;
    if (a_mats) t += (*a_mats)[k] * (Matrix::Identity(n, n) - czz * czz_pinv);
    model.t_mats[k] = std::move(t);
    model.fixed_k[k] = std::move(ortho.k_mats[k]);
    degenerate[k] = std::find(ortho.zero_ws.begin(), ortho.zero_ws.end(), k) != ortho.zero_ws.end();
  });
  for (std::size_t k = 0; k < p; ++k) {
    if (degenerate[k]) model.meta.degenerate_terms.push_back(k);
  }

  model.meta.interp_residuals.assign(p, 0.0);
  model.meta.residual_scales.assign(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    const OrthoResult ortho = orthogonalize(derived_observations(q_specs, ctx, train.s_y_indices[k]),
                                            std::nullopt, options.tol);
    const Ensemble& z = ortho.ws[k];
    Matrix lhs = Matrix::Zero(m, n);
    for (std::size_t j = 0; j < p; ++j) lhs += model.t_mats[j] * est_cov(ortho.ws[j], z).matrix;
    const Matrix rhs = est_cov(train.s_x[k], z).matrix;
    model.meta.interp_residuals[k] = (lhs - rhs).norm();
    model.meta.residual_scales[k] = rhs.norm();
    if (model.meta.interp_residuals[k] > options.residual_tolerance * rhs.norm()) {
      throw NumericalError("fit: interpolation residual " + std::to_string(model.meta.interp_residuals[k]) +
                           " at node " + std::to_string(k) + " exceeds the build-time gate");
    }
  }
  return model;
}

/// Estimate of the reference signal at absolute position i.
inline Ensemble apply(const FilterModel& model, const FilterContext& ctx, std::size_t i,
                      ApplyMode mode = ApplyMode::PerSignal) {
  if (ctx.history.empty()) throw InvalidInput("apply: empty history");
  if (ctx.history.common_m() != model.n()) throw InvalidInput("apply: observation dimension mismatch");
  const std::vector<Ensemble> ws = filter_terms(model, ctx, i, mode);
  Ensemble estimate = Ensemble::zeros(model.m(), ctx.history.common_s());
  for (std::size_t j = 0; j < model.p; ++j) estimate = estimate + transform(model.t_mats[j], ws[j]);
  return estimate;
}

/// rho_k = ||sum_j T_j E[w_jk w_kk] - E[x_k w_kk]||_F, recomputed from the training data.
inline std::vector<double> interp_residual(const FilterModel& model, const TrainingSet& train) {
  train.validate();
  if (train.p() != model.p) throw InvalidInput("interp_residual: order mismatch");
  const FilterContext ctx{train.s_y_context, 0};
  std::vector<double> rho(model.p, 0.0);
  for (std::size_t k = 0; k < model.p; ++k) {
    const std::vector<Ensemble> ws = filter_terms(model, ctx, train.s_y_indices[k]);
    Matrix lhs = Matrix::Zero(model.m(), model.n());
    for (std::size_t j = 0; j < model.p; ++j) lhs += model.t_mats[j] * est_cov(ws[j], ws[k]).matrix;
    rho[k] = (lhs - est_cov(train.s_x[k], ws[k]).matrix).norm();
  }
  return rho;
}

/// Largest lag (in sequence positions) the model's Q-operators reach back
/// from i; a context window must start at or before i minus this value.
inline std::size_t required_history(const FilterModel& model, std::size_t i) {
  std::size_t earliest = i;
  for (const auto& q : model.q_specs) earliest = std::min(earliest, q.earliest_index(i));
  return i - earliest;
}

}  // namespace iflt
