#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "syncorr/correlations.hpp"
#include "syncorr/parallel.hpp"
#include "syncorr/tracial.hpp"

namespace syncorr {

/// Pair weights (a, b, c) = (x01, x02, x12) over the three question pairs.
struct Direction3 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct NormalizedDirection {
  bool degenerate = false;
  std::array<bool, 3> vanishes{};  // which of (a, b, c) are exactly zero
  double a = 0.0;                  // a/c, defined iff !degenerate
  double b = 0.0;                  // b/c
};

/// Rescales so the third weight is 1 (the commutation relations are
/// invariant under global nonzero scaling, including negative c). A zero
/// component makes the direction degenerate.
NormalizedDirection normalize_direction(const Direction3& x);

/// An extreme trace of the three-projection algebra: a point evaluation in
/// {0,1}³ on a scalar block, or the normalized trace on the 2×2 block.
struct TraceAtom {
  std::array<double, 3> diag;     // (τA, τB, τC)
  std::array<double, 3> offdiag;  // (τ(AB), τ(AC), τ(BC))
  bool is_m2 = false;
  std::array<int, 3> bits{};  // projection values, scalar atoms only
};

/// The universal algebra of three projections A, B, C with the relations
/// [A, aB + bC] = [B, aA + C] = 0 (a, b ≠ 0): isomorphic to C⁸ ⊕ M₂ when
/// the 2×2 block exists, in which case
///   A = e11,  B = [[t, s], [s, 1−t]],  C = [[z, −(a/b)s], [−(a/b)s, 1−z]]
/// with s = √(t(1−t)), t fixed by the second relation, and z one of the two
/// roots of the projection constraint z(1−z) = (a²/b²)t(1−t). Exactly one
/// root satisfies the second relation except at a vanishing discriminant.
struct Universal3Rep {
  double a = 0.0;
  double b = 0.0;
  double t = 0.0;
  bool has_m2 = false;
  double disc = 0.0;     // 1 − (4a²/b²) t(1−t)
  double z = 0.0;        // selected root
  double z_other = 0.0;  // rejected root
  double winner_residual = 0.0;  // ‖[B, aA + C]‖ at the selected root
  double loser_residual = 0.0;   // same at the rejected root
  bool branches_coincide = false;  // double root z = 1/2

  Eigen::Matrix2d A, B, C;  // defined iff has_m2

  /// 8 scalar atoms in descending-bit order (1,1,1), (1,1,0), …, (0,0,0),
  /// then the M₂ atom when present.
  std::vector<TraceAtom> atoms;
};

/// Computes t = (b² + 2a²b − a²b² − a²) / (4a²b), decides whether the 2×2
/// block exists (t ∈ (0,1) and nonnegative discriminant), selects the z
/// root by relation-residual minimization, and tabulates the trace atoms.
Universal3Rep build_rep(double a, double b);

struct RepReport {
  double proj_residual_a = 0.0;  // max(‖A²−A‖, ‖A−A*‖)
  double proj_residual_b = 0.0;
  double proj_residual_c = 0.0;
  double relation_residual_1 = 0.0;  // ‖[A, aB + bC]‖
  double relation_residual_2 = 0.0;  // ‖[B, aA + C]‖
  double relation_residual_3 = 0.0;  // ‖[C, bA + B]‖, implied by the others

  double max_residual() const;
};

/// Residuals of the projection and commutation relations on the 2×2 block.
RepReport verify_rep(const Universal3Rep& rep);

/// w(i,i) = Σ λ_k diag_k,  w(i,j) = Σ λ_k offdiag_k for convex atom
/// weights λ.
CorrelationMatrix correlation_from_trace(const Universal3Rep& rep,
                                         const std::vector<double>& weights);

/// Block model (scalar blocks per weighted atom, plus the 2×2 block)
/// whose synthesized correlation reproduces correlation_from_trace.
/// Atoms with zero weight are dropped, keeping the trace faithful.
TracialModel realizing_model(const Universal3Rep& rep,
                             const std::vector<double>& weights);

/// max over X ∈ {A,B,C} of ‖[H, X]‖ for
/// H = (aB + bC)² − (a+b)(aB + bC), which the relations force into the
/// center of the algebra.
double central_element_residual(const Universal3Rep& rep);

struct GridPointCheck {
  double a = 0.0;
  double b = 0.0;
  bool has_m2 = false;
  double max_residual = 0.0;  // projections + both relations
  double loser_residual = 0.0;
  bool branches_coincide = false;
  double central_residual = 0.0;
};

/// Checks build_rep over a list of directions. Points are independent;
/// the parallel kernel matches the serial reference exactly.
std::vector<GridPointCheck> verify_grid(
    const std::vector<std::pair<double, double>>& points,
    Exec exec = Exec::parallel);

/// The standard verification grid: all pairs over
/// {±3, ±2, ±1.5, ±1, ±0.75, ±0.5, ±0.25}.
std::vector<std::pair<double, double>> standard_grid();

/// `count` random directions in [−3,3]², rejection-filtered to those whose
/// algebra has the 2×2 block. Deterministic given the seed.
std::vector<std::pair<double, double>> random_directions(int count,
                                                         std::uint64_t seed);

}  // namespace syncorr
