#pragma once

#include <Eigen/Dense>
#include <vector>

#include "syncorr/correlations.hpp"
#include "syncorr/parallel.hpp"
#include "syncorr/tracial.hpp"
#include "syncorr/universal3.hpp"

namespace syncorr {

enum class CorrClass { loc, q };
enum class Side { upper, lower };

/// Optimize x·w over the off-diagonal entries w of class-`cls` correlation
/// matrices with fixed diagonal y. Pair weights x are lexicographic (i<j).
struct SliceQuery {
  int n = 3;
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  CorrClass cls = CorrClass::q;
  Side side = Side::upper;
};

struct SliceResult {
  double value = 0.0;
  std::vector<double> weights;  // optimal atom weights, full atom list
  Eigen::VectorXd achieved_w;   // optimizing upper-triangle vector
  TracialModel realizing_model;
  /// Set when the optimum was computed without a 2×2 block: a degenerate
  /// direction, a direction without the 2×2 representation, or a local
  /// query.
  bool degenerate_path = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// τ(PQ) range for projections with traces yP, yQ:
/// [max(0, yP + yQ − 1), min(yP, yQ)].
Interval pair_bounds(double y_p, double y_q);

/// Indicator functions on subintervals of [0,1] witnessing an endpoint of
/// pair_bounds: overlapping placement for the maximum, opposite-end
/// placement for the minimum.
struct IntervalPair {
  double p_start = 0.0, p_len = 0.0;
  double q_start = 0.0, q_len = 0.0;

  double overlap() const;
};

IntervalPair interval_witness(double y_p, double y_q, bool maximize);

/// Column data for the simplex LP: one atom contributes its diagonal to the
/// equality constraints and its off-diagonal to the objective.
struct LpAtom {
  Eigen::VectorXd diag;
  Eigen::VectorXd offdiag;
};

struct LpSolution {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> lambda;
  std::vector<int> support;
  long long supports_checked = 0;  // infeasibility certificate when !feasible
};

/// Exact optimum of Σ_k λ_k (objective·offdiag_k) subject to Σλ = 1,
/// Σ λ_k diag_k = y, λ ≥ 0, by enumerating all support sets of size at most
/// the number of equalities in lexicographic order and solving the
/// resulting square systems. Deterministic; ties keep the lexicographically
/// smallest support.
LpSolution lp_solve(const std::vector<LpAtom>& atoms,
                    const Eigen::VectorXd& objective, const Eigen::VectorXd& y,
                    Side side);

/// Exact optimum over distributions on deterministic {0,1}^n assignments
/// (n ≤ 4); the realizing model is commutative.
SliceResult slice_local(const SliceQuery& query);

/// Exact optimum over the class-q three-question set: for a direction with
/// all pair weights nonzero, an LP over the trace atoms of the
/// three-projection universal algebra; for degenerate directions the local
/// value, which the commutative interval construction attains. The lower
/// side is computed through l(y,x) = −u(y,−x).
SliceResult slice_q3(const SliceQuery& query);

/// Closed form for degenerate directions (at least one zero pair weight):
/// each active pair contributes its pair_bounds endpoint selected by the
/// weight sign and the side.
double degenerate_slice_value(const SliceQuery& query);

struct DominanceEntry {
  int query = 0;
  double bound = 0.0;
  bool degenerate_path = false;
  int support = 0;          // samples within the δ-neighborhood of y
  double max_excess = 0.0;  // ≤ tol when the bound dominates; NaN if no data
  bool no_data = true;
};

/// For each query, reports the largest excess x·w − bound − allowance
/// (sign flipped on the lower side) over samples with ‖diag − y‖∞ ≤ delta.
/// The allowance is the sharp Lipschitz term Σ_i (Σ_{j≠i}|x_ij|)·|y_i−y'_i|
/// for the sample's own diagonal y', so points of the queried class can
/// never show a positive excess beyond numerics. The bound dominates the
/// sample set when every reported excess is at most the caller's
/// tolerance. Queries are independent; the parallel kernel matches the
/// serial reference exactly.
std::vector<DominanceEntry> dominance_check(
    const std::vector<DqSample>& samples, const std::vector<SliceQuery>& queries,
    double delta, Exec exec = Exec::parallel);

}  // namespace syncorr
