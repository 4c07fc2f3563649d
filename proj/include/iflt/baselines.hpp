#pragma once

// Per-pair comparators: the Wiener-type filter T = E[xy] E[yy]^+ and the
// exponentially weighted RLS filter, both fitted to a single (x, y) pair.

#include <cmath>
#include <cstddef>

#include "iflt/errors.hpp"
#include "iflt/linalg.hpp"
#include "iflt/signal.hpp"

namespace iflt {

struct WienerModel {
  Matrix t;
};

inline WienerModel wiener_fit(const Ensemble& x, const Ensemble& y, const SpectralTolerance& tol = {}) {
  if (x.realizations() != y.realizations()) throw InvalidInput("wiener_fit: realization counts differ");
  return {est_cov(x, y).matrix * pseudo_inverse(est_cov(y, y).matrix, tol)};
}

inline Ensemble wiener_apply(const WienerModel& model, const Ensemble& y) {
  if (model.t.cols() != y.components()) throw InvalidInput("wiener_apply: dimension mismatch");
  return transform(model.t, y);
}

/// Exponentially weighted RLS with P_0 = delta I; a large delta makes the
/// initialisation negligible.
struct RlsState {
  Matrix weights;     // m x n
  Matrix p_inv_corr;  // n x n inverse correlation estimate
  double forgetting = 1.0;
  double delta = 1.0;
  std::size_t steps = 0;
};

inline RlsState rls_init(Index n, Index m, double forgetting, double delta) {
  if (n < 1 || m < 1) throw InvalidInput("rls_init: dimensions must be positive");
  if (!(forgetting > 0.0 && forgetting <= 1.0)) throw InvalidInput("rls_init: forgetting must lie in (0, 1]");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("rls_init: delta must be finite and > 0");
  return {Matrix::Zero(m, n), Matrix::Identity(n, n) * delta, forgetting, delta, 0};
}

/// In-place update with one (y, x) column pair.
inline void rls_update(RlsState& state, const Eigen::Ref<const Vector>& y, const Eigen::Ref<const Vector>& x) {
  if (y.size() != state.p_inv_corr.rows() || x.size() != state.weights.rows()) {
    throw InvalidInput("rls_step: column dimension mismatch");
  }
  const Vector py = state.p_inv_corr * y;
  const double denom = state.forgetting + y.dot(py);
  const Vector gain = py / denom;
  const Vector error = x - state.weights * y;
  state.weights.noalias() += error * gain.transpose();
  Matrix p = (state.p_inv_corr - gain * py.transpose()) / state.forgetting;
  state.p_inv_corr = 0.5 * (p + p.transpose());
  ++state.steps;
  if (!std::isfinite(denom) || !state.weights.allFinite() || !state.p_inv_corr.allFinite()) {
    throw NumericalError("rls_step: non-finite update (check forgetting and delta)");
  }
}

inline RlsState rls_step(RlsState state, const Vector& y, const Vector& x) {
  rls_update(state, y, x);
  return state;
}

/// Feeds the realization columns of (y, x) in order.
inline RlsState rls_fit(const Ensemble& x, const Ensemble& y, double forgetting, double delta) {
  if (x.realizations() != y.realizations()) throw InvalidInput("rls_fit: realization counts differ");
  RlsState state = rls_init(y.components(), x.components(), forgetting, delta);
  for (Index r = 0; r < y.realizations(); ++r) rls_update(state, y.data().col(r), x.data().col(r));
  return state;
}

inline Ensemble rls_apply(const RlsState& state, const Ensemble& y) {
  if (state.weights.cols() != y.components()) throw InvalidInput("rls_apply: dimension mismatch");
  return transform(state.weights, y);
}

}  // namespace iflt
