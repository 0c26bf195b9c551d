#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "syncorr/errors.hpp"

namespace syncorr {

inline constexpr double kDefaultTol = 1e-9;

/// Index of pair (i, j), i < j, in the lexicographic list of pairs over
/// [n]: (0,1), (0,2), ..., (0,n-1), (1,2), ...
inline int pair_index(int i, int j, int n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline int pair_count(int n) { return n * (n - 1) / 2; }

/// Joint outcome probabilities p(i,j|x,y) for two parties choosing among n
/// questions with m outcomes each. Stored row-major in (x, y, i, j).
struct CorrelationTensor {
  int n = 0;
  int m = 0;
  std::vector<double> p;

  CorrelationTensor() = default;
  CorrelationTensor(int n_, int m_)
      : n(n_), m(m_),
        p(static_cast<std::size_t>(n_) * n_ * m_ * m_, 0.0) {}

  std::size_t idx(int x, int y, int i, int j) const {
    return ((static_cast<std::size_t>(x) * n + y) * m + i) * m + j;
  }
  double& at(int x, int y, int i, int j) { return p[idx(x, y, i, j)]; }
  double at(int x, int y, int i, int j) const { return p[idx(x, y, i, j)]; }
};

/// Marginal densities p_A(i|x) and p_B(j|y).
struct Marginals {
  Eigen::MatrixXd pA;  // n×m, row x
  Eigen::MatrixXd pB;  // n×m, row y
  /// Set when the input signals beyond tolerance and the average over the
  /// other party's question was used instead of the canonical question 0.
  bool y_averaged = false;
};

/// Result of classifying a tensor against the correlation constraint
/// families. Flags are set independently; max_violation is the largest
/// residual over all families.
struct ClassReport {
  bool is_correlation = false;
  bool is_nonsignaling = false;
  bool is_synchronous = false;
  double max_violation = 0.0;

  double nonnegativity_residual = 0.0;
  double normalization_residual = 0.0;
  double nonsignaling_residual = 0.0;
  double synchronicity_residual = 0.0;

  bool all() const { return is_correlation && is_nonsignaling && is_synchronous; }
};

/// Symmetric matrix w with w(x,y) = p(0,0|x,y) carrying the full data of a
/// synchronous two-outcome correlation.
struct CorrelationMatrix {
  int n = 0;
  Eigen::MatrixXd w;

  CorrelationMatrix() = default;
  explicit CorrelationMatrix(Eigen::MatrixXd mat)
      : n(static_cast<int>(mat.rows())), w(std::move(mat)) {}
};

/// First violated matrix constraint, if any: symmetry, entry range,
/// w(x,y) ≤ min(w(x,x), w(y,y)), or 1 + w(x,y) − w(x,x) − w(y,y) ≥ 0.
std::optional<Violation> matrix_infeasibility(const CorrelationMatrix& mat,
                                              double tol = kDefaultTol);

ClassReport validate(const CorrelationTensor& t, double tol = kDefaultTol);

Marginals marginals(const CorrelationTensor& t, double tol = kDefaultTol);

struct RestrictResult {
  CorrelationMatrix matrix;
  /// max |p(0,0|x,y) − p(0,0|y,x)| before symmetrization.
  double asymmetry = 0.0;
};

/// w(x,y) = p(0,0|x,y) for a synchronous non-signaling two-outcome tensor,
/// symmetrized by averaging the (x,y) and (y,x) entries.
RestrictResult restrict_to_matrix(const CorrelationTensor& t,
                                  double tol = kDefaultTol);

/// Inverse of restrict_to_matrix: rebuilds the two-outcome tensor with
/// diagonal blocks diag(w(x,x), 1−w(x,x)) and off-diagonal blocks
///   [ w(x,y)            w(x,x) − w(x,y)            ]
///   [ w(y,y) − w(x,y)   1 + w(x,y) − w(x,x) − w(y,y) ].
CorrelationTensor expand(const CorrelationMatrix& mat, double tol = kDefaultTol);

/// Maps an (n,m) synchronous non-signaling tensor q to the two-outcome
/// tensor over nm questions, pairing (x,i) ↦ x·m + i, with
/// p(0,0|(x,i),(y,j)) = q(i,j|x,y) and the remaining entries fixed by the
/// marginals of q.
CorrelationTensor embed_outcomes(const CorrelationTensor& q,
                                 double tol = kDefaultTol);

struct ProjectionReport {
  /// True iff the projected tensor is a synchronous non-signaling
  /// correlation within tolerance.
  bool in_class = false;
  std::optional<CorrelationTensor> tensor;  // present iff in_class
  std::string violated;                     // first failing family otherwise
  double residual = 0.0;
};

/// Reads the (n,m) tensor q(i,j|x,y) = p(0,0|(x,i),(y,j)) off a two-outcome
/// tensor over nm questions, and reports whether it is a synchronous
/// non-signaling correlation. Non-membership is an informative result, not
/// an error.
ProjectionReport project_outcomes(const CorrelationTensor& p, int n, int m,
                                  double tol = kDefaultTol);

}  // namespace syncorr
