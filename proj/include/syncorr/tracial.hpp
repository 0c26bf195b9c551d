#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "syncorr/correlations.hpp"
#include "syncorr/linalg.hpp"
#include "syncorr/parallel.hpp"
#include "syncorr/rng.hpp"

namespace syncorr {

/// Direct sum of full matrix blocks M_{d_0} ⊕ … ⊕ M_{d_{K−1}}.
struct BlockAlgebra {
  std::vector<int> dims;

  int block_count() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
};

/// Desk-scale cap on Σ d_k; ops that construct or check models take it as a
/// parameter with this default.
inline constexpr int kMaxTotalDim = 32;

/// Convex block weights; trace(X) = Σ_k λ_k · tr(X_k) / d_k. This is the
/// general tracial state on a finite-dimensional block algebra.
struct TracialState {
  std::vector<double> weights;

  bool faithful(double tol = 0.0) const {
    for (double w : weights)
      if (!(w > tol)) return false;
    return !weights.empty();
  }
};

/// One matrix per block of the algebra.
struct BlockOperator {
  std::vector<Matrix> blocks;
  bool hermitian = false;
  bool projection = false;
};

BlockOperator block_identity(const BlockAlgebra& algebra);
BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator*(double s, const BlockOperator& a);
BlockOperator adjoint(const BlockOperator& a);
BlockOperator commutator(const BlockOperator& a, const BlockOperator& b);
/// Largest singular value over blocks.
double op_norm(const BlockOperator& a);

Complex trace_of(const BlockAlgebra& algebra, const TracialState& state,
                 const BlockOperator& x);
/// τ(XY) without forming the product operator.
Complex trace_pair(const BlockAlgebra& algebra, const TracialState& state,
                   const BlockOperator& x, const BlockOperator& y);

/// A block algebra with a tracial state and one projection-valued measure
/// per question: pvms[x][i] is the projection for outcome i of question x.
struct TracialModel {
  BlockAlgebra algebra;
  TracialState trace;
  std::vector<std::vector<BlockOperator>> pvms;

  int questions() const { return static_cast<int>(pvms.size()); }
  int outcomes() const {
    return pvms.empty() ? 0 : static_cast<int>(pvms[0].size());
  }

  Complex trace_of(const BlockOperator& x) const {
    return syncorr::trace_of(algebra, trace, x);
  }
  Complex trace_pair(const BlockOperator& x, const BlockOperator& y) const {
    return syncorr::trace_pair(algebra, trace, x, y);
  }
};

/// Largest residual of the model invariants: weight positivity/sum, block
/// shapes, each PVM's projection, orthogonality, and sum-to-identity
/// conditions. Throws naming the offending block when above tol.
void check_model(const TracialModel& model, double tol = kDefaultTol,
                 int max_total_dim = kMaxTotalDim);

/// p(i,j|x,y) = τ(E_{x,i} E_{y,j}); the output is a synchronous quantum
/// correlation.
CorrelationTensor synthesize(const TracialModel& model,
                             double tol = kDefaultTol);

/// Hermitian idempotent of exact rank: conjugates diag(1^rank, 0^(d−rank))
/// by a random unitary. Deterministic given the seed.
BlockOperator random_projection(int d, int rank, std::uint64_t seed);

/// m projections summing to I: conjugates a random partition of the
/// standard basis (empty parts allowed) by a random unitary.
std::vector<BlockOperator> random_pvm(int d, int m, std::uint64_t seed);

/// Numerical form of the trace-orthogonality lemma: for projections with a
/// faithful trace, τ(P_i P_j) = τ((P_i P_j)*(P_i P_j)), so a vanishing
/// trace pairing forces a vanishing operator product, blockwise within
/// √(d_k/λ_k)·√tol.
struct OrthogonalityVerdict {
  bool hypothesis_met = false;   // max_{i≠j} |τ(P_i P_j)| ≤ tol
  double max_trace_pair = 0.0;
  double max_product_norm = 0.0;  // max_{i≠j} ‖P_i P_j‖
  double bound_constant = 0.0;    // C = max_k √(d_k / λ_k)
  double product_bound = 0.0;     // C·√tol

  bool sum_hypothesis_met = false;  // |Σ_{i,j} τ(P_i P_j) − 1| ≤ tol
  double sum_residual = 0.0;
  double pvm_defect = 0.0;  // ‖Σ P_i − I‖
};

OrthogonalityVerdict orthogonality_to_pvm(
    const BlockAlgebra& algebra, const TracialState& state,
    const std::vector<BlockOperator>& projections, double tol);

/// max_i ‖[P_i, Σ_{j≠i} x_{ij} P_j]‖ for a two-outcome model, with P_i the
/// outcome-0 projection of question i and pair weights in lexicographic
/// (i<j) order. Zero iff the commutation relations hold.
double commutator_defect(const TracialModel& model,
                         const std::vector<double>& pair_weights);

/// Direction H = i[B,A] along which conjugation strictly increases
/// τ(A e^{iHt} B e^{−iHt}) whenever A and B do not commute; the derivative
/// at t = 0 equals τ([B,A]*[B,A]) ≥ 0.
struct ImprovingDirection {
  BlockOperator h;
  double derivative = 0.0;
};

ImprovingDirection improving_direction(const BlockAlgebra& algebra,
                                       const TracialState& state,
                                       const BlockOperator& a,
                                       const BlockOperator& b);

/// f(t) = τ(A e^{iHt} B e^{−iHt}); finite differences of this function are
/// the independent oracle for improving_direction.
double conjugated_pair_trace(const BlockAlgebra& algebra,
                             const TracialState& state, const BlockOperator& a,
                             const BlockOperator& b, const BlockOperator& h,
                             double t);

/// Random model with one PVM of `outcomes` projections per question.
TracialModel random_model(int questions, int outcomes, int max_dim, Rng& rng);

/// Random two-outcome model: per question one projection of uniform random
/// rank per block (outcome 1 is the complement).
TracialModel random_projection_model(int questions, int max_dim, Rng& rng);

/// One diagonal/upper-triangle sample (y_i = τ(P_i), w_ij = τ(P_i P_j)).
struct DqSample {
  Eigen::VectorXd y;
  Eigen::VectorXd w;  // pairs i<j, lexicographic
};

/// `count` samples from random two-outcome models with 1–3 blocks of
/// dimension ≤ max_dim. Sample i draws from stream(seed, i), so the
/// parallel kernel reproduces the serial reference bit for bit.
std::vector<DqSample> sample_dq(int n, int max_dim, int count,
                                std::uint64_t seed,
                                Exec exec = Exec::parallel);

/// The (y, w) data of a two-outcome model, as one sample.
DqSample model_sample(const TracialModel& model);

}  // namespace syncorr
