#pragma once

// Signal ensembles, sequences of ensembles, empirical covariances and the
// Q-operator library.
//
// An ensemble is an m x s matrix: column r is the r-th realization of a
// random m-vector. Every ensemble taking part in one experiment shares the
// realization index, so cross-covariances between any two of them are
// well defined.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "iflt/errors.hpp"
#include "iflt/linalg.hpp"

namespace iflt {

class Ensemble {
 public:
  /// Wraps raw data; the result is not marked centered.
  explicit Ensemble(Matrix data) : Ensemble(std::move(data), false) {}

  /// Wraps data that is already centered; throws if any row mean is not
  /// negligible (|mean| <= 1e-10 * row RMS).
  static Ensemble from_centered(Matrix data) {
    Ensemble e(std::move(data), false);
    if (!e.rows_are_centered()) throw InvalidInput("Ensemble: data is not centered");
    e.centered_ = true;
    return e;
  }

  /// Zero ensemble (centered) of the given shape.
  static Ensemble zeros(Index m, Index s) { return Ensemble(Matrix::Zero(m, s), true); }

  const Matrix& data() const noexcept { return data_; }
  Index components() const noexcept { return data_.rows(); }
  Index realizations() const noexcept { return data_.cols(); }
  bool centered() const noexcept { return centered_; }

  bool rows_are_centered(double rel_tol = 1e-10) const {
    const double s = static_cast<double>(data_.cols());
    for (Index r = 0; r < data_.rows(); ++r) {
      const double mean = data_.row(r).sum() / s;
      const double rms = std::sqrt(data_.row(r).squaredNorm() / s);
      if (std::abs(mean) > rel_tol * rms) return false;
    }
    return true;
  }

  // Linear operations keep the centered flag: a linear image of centered
  // data is centered.
  friend Ensemble operator+(const Ensemble& a, const Ensemble& b) {
    check_same_shape(a, b, "Ensemble +");
    return Ensemble(a.data_ + b.data_, a.centered_ && b.centered_);
  }
  friend Ensemble operator-(const Ensemble& a, const Ensemble& b) {
    check_same_shape(a, b, "Ensemble -");
    return Ensemble(a.data_ - b.data_, a.centered_ && b.centered_);
  }
  friend Ensemble operator*(double c, const Ensemble& a) {
    if (!std::isfinite(c)) throw InvalidInput("Ensemble scale: non-finite factor");
    return Ensemble(c * a.data_, a.centered_);
  }
  /// Applies the matrix to every realization column: (K e)(r) = K e(r).
  friend Ensemble transform(const Matrix& k, const Ensemble& a) {
    if (k.cols() != a.components()) throw InvalidInput("transform: dimension mismatch");
    return Ensemble(k * a.data_, a.centered_);
  }

  friend Ensemble center(const Ensemble& e);

  static void check_same_shape(const Ensemble& a, const Ensemble& b, const char* what) {
    if (a.components() != b.components() || a.realizations() != b.realizations()) {
      throw InvalidInput(std::string(what) + ": shape mismatch");
    }
  }

 private:
  Ensemble(Matrix data, bool centered) : data_(std::move(data)), centered_(centered) {
    if (data_.cols() < 2) throw InvalidInput("Ensemble: need at least 2 realizations");
    if (data_.rows() < 1) throw InvalidInput("Ensemble: need at least 1 component");
    require_finite(data_, "Ensemble");
  }

  Matrix data_;
  bool centered_ = false;
};

/// Subtracts each row's empirical mean.
inline Ensemble center(const Ensemble& e) {
  Matrix d = e.data_;
  const Vector mean = d.rowwise().mean();
  d.colwise() -= mean;
  return Ensemble(std::move(d), true);
}

/// Marks data centered if it already is; otherwise centers it. Used at
/// ingestion so that stored centered data round-trips bit for bit.
inline Ensemble ensure_centered(Matrix data) {
  Ensemble e(std::move(data));
  if (e.rows_are_centered()) return Ensemble::from_centered(e.data());
  return center(e);
}

struct CovMatrix {
  Matrix matrix;
  std::size_t samples = 0;
};

/// Maximum-likelihood cross-covariance (1/s) A B^T of centered ensembles.
inline CovMatrix est_cov(const Ensemble& a, const Ensemble& b) {
  if (a.realizations() != b.realizations()) {
    throw InvalidInput("est_cov: realization counts differ");
  }
  if (!a.centered() || !b.centered()) throw InvalidInput("est_cov: inputs must be centered");
  const auto s = static_cast<double>(a.realizations());
  return {a.data() * b.data().transpose() / s, static_cast<std::size_t>(a.realizations())};
}

/// Empirical squared E-norm (1/s) ||data||_F^2.
inline double energy(const Ensemble& e) {
  return e.data().squaredNorm() / static_cast<double>(e.realizations());
}

/// Ordered ensembles sharing shape and realization index.
class SignalSequence {
 public:
  SignalSequence() = default;

  explicit SignalSequence(std::vector<Ensemble> items) : items_(std::move(items)) {
    for (const auto& e : items_) {
      if (e.components() != items_.front().components() ||
          e.realizations() != items_.front().realizations()) {
        throw InvalidInput("SignalSequence: items must share component and realization counts");
      }
    }
  }

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const Ensemble& operator[](std::size_t i) const { return items_[i]; }
  const Ensemble& at(std::size_t i) const {
    if (i >= items_.size()) throw InvalidInput("SignalSequence: index " + std::to_string(i) + " out of range");
    return items_[i];
  }
  Index common_m() const { return items_.empty() ? 0 : items_.front().components(); }
  Index common_s() const { return items_.empty() ? 0 : items_.front().realizations(); }
  const std::vector<Ensemble>& items() const noexcept { return items_; }

  void push_back(Ensemble e) {
    if (!items_.empty() && (e.components() != common_m() || e.realizations() != common_s())) {
      throw InvalidInput("SignalSequence: items must share component and realization counts");
    }
    items_.push_back(std::move(e));
  }

 private:
  std::vector<Ensemble> items_;
};

// Q-operators. Each maps an indexed observation stream to one derived
// observation at position i.

struct Identity {
  bool operator==(const Identity&) const = default;
};
/// seq[max(0, i - d)]: the clamp keeps the earliest observation at the boundary.
struct SequenceLag {
  std::size_t d = 0;
  bool operator==(const SequenceLag&) const = default;
};
/// seq[i] with its rows rotated down by d.
struct ComponentShift {
  std::size_t d = 0;
  bool operator==(const ComponentShift&) const = default;
};
/// Discretized first-order integral: sum over t <= i of weights[t] * seq[t].
/// Positions past the end of `weights` carry weight zero.
struct WeightedPrefixSum {
  std::vector<double> weights;
  bool operator==(const WeightedPrefixSum&) const = default;
};

struct QOperatorSpec {
  std::variant<Identity, SequenceLag, ComponentShift, WeightedPrefixSum> kind;

  static QOperatorSpec identity() { return {Identity{}}; }
  static QOperatorSpec lag(std::size_t d) { return {SequenceLag{d}}; }
  static QOperatorSpec shift(std::size_t d) { return {ComponentShift{d}}; }
  static QOperatorSpec prefix_sum(std::vector<double> w) { return {WeightedPrefixSum{std::move(w)}}; }

  bool operator==(const QOperatorSpec&) const = default;

  /// Earliest absolute index touched when evaluated at i.
  std::size_t earliest_index(std::size_t i) const {
    if (const auto* lag = std::get_if<SequenceLag>(&kind)) return i >= lag->d ? i - lag->d : 0;
    if (const auto* ps = std::get_if<WeightedPrefixSum>(&kind)) {
      for (std::size_t t = 0; t <= i && t < ps->weights.size(); ++t) {
        if (ps->weights[t] != 0.0) return t;
      }
    }
    return i;
  }

  void validate() const {
    if (const auto* ps = std::get_if<WeightedPrefixSum>(&kind)) {
      for (double w : ps->weights) {
        if (!std::isfinite(w)) throw InvalidInput("WeightedPrefixSum: non-finite weight");
      }
    }
  }
};

/// Evaluates q at absolute position i on a window whose first item sits at
/// absolute position `offset`.
inline Ensemble apply_q(const QOperatorSpec& q, const SignalSequence& seq, std::size_t i,
                        std::size_t offset = 0) {
  q.validate();
  if (i < offset || i - offset >= seq.size()) {
    throw InvalidInput("apply_q: index " + std::to_string(i) + " outside the sequence window");
  }
  if (q.earliest_index(i) < offset) {
    throw InvalidInput("apply_q: insufficient history for index " + std::to_string(i));
  }
  const auto item = [&](std::size_t abs) -> const Ensemble& { return seq[abs - offset]; };

  return std::visit(
      [&](const auto& op) -> Ensemble {
        using Op = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<Op, Identity>) {
          return item(i);
        } else if constexpr (std::is_same_v<Op, SequenceLag>) {
          return item(i >= op.d ? i - op.d : 0);
        } else if constexpr (std::is_same_v<Op, ComponentShift>) {
          const Ensemble& e = item(i);
          const Index m = e.components();
          Matrix out(m, e.realizations());
          for (Index r = 0; r < m; ++r) {
            out.row((r + static_cast<Index>(op.d % static_cast<std::size_t>(m))) % m) = e.data().row(r);
          }
          return e.centered() ? Ensemble::from_centered(std::move(out)) : Ensemble(std::move(out));
        } else {
          Ensemble acc = Ensemble::zeros(seq.common_m(), seq.common_s());
          bool all_centered = true;
          for (std::size_t t = 0; t <= i && t < op.weights.size(); ++t) {
            if (op.weights[t] == 0.0) continue;
            acc = acc + op.weights[t] * item(t);
            all_centered = all_centered && item(t).centered();
          }
          return all_centered ? acc : Ensemble(acc.data());
        }
      },
      q.kind);
}

struct DistinctnessReport {
  std::vector<std::pair<std::size_t, std::size_t>> coincident_pairs;
  bool all_distinct() const noexcept { return coincident_pairs.empty(); }
};

/// Flags pairs (i, j) with ||V_i - V_j||_F <= 1e-10 * max_k ||V_k||_F.
inline DistinctnessReport distinctness_check(const std::vector<Ensemble>& vs) {
  DistinctnessReport report;
  double scale = 0.0;
  for (const auto& v : vs) scale = std::max(scale, v.data().norm());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      if (vs[i].components() != vs[j].components() || vs[i].realizations() != vs[j].realizations()) {
        continue;
      }
      if ((vs[i].data() - vs[j].data()).norm() <= 1e-10 * scale) {
        report.coincident_pairs.emplace_back(i, j);
      }
    }
  }
  return report;
}

/// Reference signals x_1..x_p paired with observation positions in a context sequence.
struct TrainingSet {
  std::vector<Ensemble> s_x;
  SignalSequence s_y_context;
  std::vector<std::size_t> s_y_indices;

  std::size_t p() const noexcept { return s_x.size(); }

  void validate() const {
    if (s_x.empty()) throw InvalidInput("TrainingSet: p must be >= 1");
    if (s_x.size() != s_y_indices.size()) {
      throw InvalidInput("TrainingSet: |s_x| and |s_y_indices| differ");
    }
    for (std::size_t k = 0; k < s_y_indices.size(); ++k) {
      if (s_y_indices[k] >= s_y_context.size()) throw InvalidInput("TrainingSet: index out of range");
      if (k > 0 && s_y_indices[k] <= s_y_indices[k - 1]) {
        throw InvalidInput("TrainingSet: indices must be strictly increasing");
      }
      if (s_x[k].realizations() != s_y_context.common_s()) {
        throw InvalidInput("TrainingSet: reference and observation realization counts differ");
      }
    }
  }
};

}  // namespace iflt
