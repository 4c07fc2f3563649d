#pragma once

// Covariance Gram-Schmidt cascade. Given aligned centered signals
// v_1..v_p it produces w_1 = v_1 and
//
//   w_i = v_i - sum_{l<i} K_il w_l,
//   K_il = E[v_i w_l] E[w_l w_l]^+ + M_il (I - E[w_l w_l] E[w_l w_l]^+),
//
// so that every empirical cross-covariance E[w_i w_j], i != j, vanishes.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "iflt/linalg.hpp"
#include "iflt/signal.hpp"

namespace iflt {

/// K_il for 0 <= l < i < p, stored as k[i][l] (row i has i entries).
using LowerTriangle = std::vector<std::vector<Matrix>>;

struct OrthoResult {
  std::vector<Ensemble> ws;
  LowerTriangle k_mats;
  /// Indices i whose w_i was deflated to exactly zero.
  std::vector<std::size_t> zero_ws;
  double max_cross_residual = 0.0;
};

/// max_{i != j} ||E[w_i w_j]||_F.
inline double cross_cov_residual(const std::vector<Ensemble>& ws) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (std::size_t j = i + 1; j < ws.size(); ++j) {
      worst = std::max(worst, est_cov(ws[i], ws[j]).matrix.norm());
    }
  }
  return worst;
}

/// max_i ||E[v_i v_i]||_F, the scale the orthogonality residual is judged against.
inline double covariance_scale(const std::vector<Ensemble>& vs) {
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, est_cov(v, v).matrix.norm());
  return scale;
}

/// Runs the cascade. `m_free`, when given, supplies M_il in the same
/// lower-triangle layout as the result's k_mats; the default is M_il = 0.
inline OrthoResult orthogonalize(const std::vector<Ensemble>& vs,
                                 const std::optional<LowerTriangle>& m_free = std::nullopt,
                                 const SpectralTolerance& tol = {}) {
  if (vs.empty()) throw InvalidInput("orthogonalize: need at least one signal");
  const Index n = vs.front().components();
  const Index s = vs.front().realizations();
  double scale = 0.0;
  for (const auto& v : vs) {
    if (v.components() != n || v.realizations() != s) {
      throw InvalidInput("orthogonalize: signals are not aligned");
    }
    if (!v.centered()) throw InvalidInput("orthogonalize: signals must be centered");
    scale = std::max(scale, v.data().norm());
  }
  if (m_free) {
    if (m_free->size() != vs.size()) throw InvalidInput("orthogonalize: m_free has wrong row count");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if ((*m_free)[i].size() != i) throw InvalidInput("orthogonalize: m_free row has wrong length");
      for (const auto& m : (*m_free)[i]) {
        if (m.rows() != n || m.cols() != n) throw InvalidInput("orthogonalize: m_free matrix must be n x n");
      }
    }
  }

  OrthoResult out;
  out.ws.reserve(vs.size());
  out.k_mats.resize(vs.size());
  const Matrix identity = Matrix::Identity(n, n);

  // E[w_l w_l]^+ and the projector onto its range, reused by later rows.
  std::vector<Matrix> cov_pinv;
  std::vector<Matrix> range_proj;

  for (std::size_t i = 0; i < vs.size(); ++i) {
    Ensemble w = vs[i];
    for (std::size_t l = 0; l < i; ++l) {
      Matrix k = est_cov(vs[i], out.ws[l]).matrix * cov_pinv[l];
      if (m_free) k += (*m_free)[i][l] * (identity - range_proj[l]);
      w = w - transform(k, out.ws[l]);
      out.k_mats[i].push_back(std::move(k));
    }
    // One refinement sweep against the rounding left by the first pass; the
    // correction is folded into K so that w_i = v_i - sum K_il w_l still holds.
    if (i > 0) {
      for (std::size_t l = 0; l < i; ++l) {
        const Matrix dk = est_cov(w, out.ws[l]).matrix * cov_pinv[l];
        w = w - transform(dk, out.ws[l]);
        out.k_mats[i][l] += dk;
      }
    }
    if (w.data().norm() <= 1e-12 * scale) {
      w = Ensemble::zeros(n, s);
      out.zero_ws.push_back(i);
    }
    const Matrix cww = est_cov(w, w).matrix;
    Matrix pinv = pseudo_inverse(cww, tol);
    range_proj.push_back(cww * pinv);
    cov_pinv.push_back(std::move(pinv));
    out.ws.push_back(std::move(w));
  }
  out.max_cross_residual = cross_cov_residual(out.ws);
  return out;
}

}  // namespace iflt
