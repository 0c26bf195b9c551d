#include "syncorr/slices.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace syncorr {

namespace {

constexpr double kSolveResidualTol = 1e-10;
constexpr double kLambdaTol = 1e-11;

void check_y_range(const Eigen::VectorXd& y) {
  for (int i = 0; i < y.size(); ++i)
    if (y(i) < 0.0 || y(i) > 1.0)
      throw ConstraintError("range", "diagonal entries must lie in [0,1]");
}

}  // namespace

Interval pair_bounds(double y_p, double y_q) {
  if (y_p < 0.0 || y_p > 1.0 || y_q < 0.0 || y_q > 1.0)
    throw ConstraintError("range", "traces must lie in [0,1]");
  return {std::max(0.0, y_p + y_q - 1.0), std::min(y_p, y_q)};
}

double IntervalPair::overlap() const {
  const double lo = std::max(p_start, q_start);
  const double hi = std::min(p_start + p_len, q_start + q_len);
  return std::max(0.0, hi - lo);
}

IntervalPair interval_witness(double y_p, double y_q, bool maximize) {
  IntervalPair w;
  w.p_len = y_p;
  w.q_len = y_q;
  w.q_start = 0.0;
  // Overlapping placement attains min(y_p, y_q); placing the first indicator
  // at the far end attains max(0, y_p + y_q − 1).
  w.p_start = maximize ? 0.0 : 1.0 - y_p;
  return w;
}

LpSolution lp_solve(const std::vector<LpAtom>& atoms,
                    const Eigen::VectorXd& objective, const Eigen::VectorXd& y,
                    Side side) {
  const int natoms = static_cast<int>(atoms.size());
  if (natoms == 0 || natoms > 16)
    throw ConstraintError("atoms", "atom count must lie in [1, 16]");
  const int dim = static_cast<int>(y.size());
  for (const LpAtom& atom : atoms) {
    if (atom.diag.size() != dim)
      throw ConstraintError("shape", "atom diagonal length mismatch");
    if (atom.offdiag.size() != objective.size())
      throw ConstraintError("shape", "atom off-diagonal length mismatch");
  }

  const int rows = dim + 1;
  Eigen::MatrixXd cols(rows, natoms);
  Eigen::VectorXd cost(natoms);
  for (int k = 0; k < natoms; ++k) {
    cols(0, k) = 1.0;
    cols.col(k).tail(dim) = atoms[k].diag;
    cost(k) = objective.dot(atoms[k].offdiag);
  }
  Eigen::VectorXd b(rows);
  b(0) = 1.0;
  b.tail(dim) = y;

  const double sense = (side == Side::upper) ? 1.0 : -1.0;

  LpSolution best;
  best.feasible = false;
  double best_value = -std::numeric_limits<double>::infinity();

  // Depth-first over index prefixes = lexicographic order over supports, so
  // the first optimum found has the lexicographically smallest support.
  std::vector<int> support;
  std::function<void(int)> visit = [&](int start) {
    for (int k = start; k < natoms; ++k) {
      support.push_back(k);
      ++best.supports_checked;

      const int s = static_cast<int>(support.size());
      Eigen::MatrixXd sub(rows, s);
      for (int c = 0; c < s; ++c) sub.col(c) = cols.col(support[c]);
      const Eigen::VectorXd lam = sub.colPivHouseholderQr().solve(b);
      const double residual = (sub * lam - b).lpNorm<Eigen::Infinity>();
      if (residual <= kSolveResidualTol &&
          lam.minCoeff() >= -kLambdaTol) {
        double value = 0.0;
        for (int c = 0; c < s; ++c)
          value += std::max(lam(c), 0.0) * cost(support[c]);
        if (!best.feasible || sense * value > sense * best_value) {
          best.feasible = true;
          best_value = value;
          best.support = support;
          best.lambda.assign(natoms, 0.0);
          for (int c = 0; c < s; ++c)
            best.lambda[support[c]] = std::max(lam(c), 0.0);
        }
      }

      if (s < rows) visit(k + 1);
      support.pop_back();
    }
  };
  visit(0);

  if (best.feasible) best.value = best_value;
  return best;
}

namespace {

// Cube-vertex atoms in descending-bit order, (1,...,1) first.
std::vector<LpAtom> local_atoms(int n) {
  const int pc = pair_count(n);
  std::vector<LpAtom> atoms;
  atoms.reserve(std::size_t(1) << n);
  for (int v = 0; v < (1 << n); ++v) {
    LpAtom atom;
    atom.diag.resize(n);
    for (int i = 0; i < n; ++i)
      atom.diag(i) = 1.0 - ((v >> (n - 1 - i)) & 1);
    atom.offdiag.resize(pc);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        atom.offdiag(pair_index(i, j, n)) = atom.diag(i) * atom.diag(j);
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

void check_query_shape(const SliceQuery& query) {
  if (query.y.size() != query.n)
    throw ConstraintError("shape", "diagonal length must equal n");
  if (query.x.size() != pair_count(query.n))
    throw ConstraintError("shape", "direction length must equal n(n-1)/2");
  check_y_range(query.y);
}

Eigen::VectorXd achieved_from(const std::vector<LpAtom>& atoms,
                              const std::vector<double>& lambda, int pc) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(pc);
  for (std::size_t k = 0; k < lambda.size(); ++k)
    w += lambda[k] * atoms[k].offdiag;
  return w;
}

TracialModel commutative_model(const std::vector<LpAtom>& atoms,
                               const std::vector<double>& lambda, int n) {
  TracialModel model;
  std::vector<const LpAtom*> kept;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    if (!(lambda[k] > 0.0)) continue;
    model.algebra.dims.push_back(1);
    model.trace.weights.push_back(lambda[k]);
    kept.push_back(&atoms[k]);
  }
  model.pvms.resize(n);
  for (int q = 0; q < n; ++q) {
    BlockOperator p, comp;
    p.hermitian = p.projection = true;
    comp.hermitian = comp.projection = true;
    for (const LpAtom* atom : kept) {
      Matrix blk(1, 1), cblk(1, 1);
      blk(0, 0) = atom->diag(q);
      cblk(0, 0) = 1.0 - atom->diag(q);
      p.blocks.push_back(blk);
      comp.blocks.push_back(cblk);
    }
    model.pvms[q] = {std::move(p), std::move(comp)};
  }
  return model;
}

SliceResult solve_upper_local(const SliceQuery& query) {
  const auto atoms = local_atoms(query.n);
  const LpSolution sol = lp_solve(atoms, query.x, query.y, Side::upper);
  if (!sol.feasible)
    throw ConstraintError("infeasible",
                          "deterministic atoms span the cube; unreachable");
  SliceResult res;
  res.value = sol.value;
  res.weights = sol.lambda;
  res.achieved_w = achieved_from(atoms, sol.lambda, pair_count(query.n));
  res.realizing_model = commutative_model(atoms, sol.lambda, query.n);
  res.degenerate_path = true;
  return res;
}

std::vector<LpAtom> rep_atoms(const Universal3Rep& rep) {
  std::vector<LpAtom> atoms;
  atoms.reserve(rep.atoms.size());
  for (const TraceAtom& atom : rep.atoms) {
    LpAtom out;
    out.diag = Eigen::Vector3d(atom.diag[0], atom.diag[1], atom.diag[2]);
    out.offdiag =
        Eigen::Vector3d(atom.offdiag[0], atom.offdiag[1], atom.offdiag[2]);
    atoms.push_back(std::move(out));
  }
  return atoms;
}

SliceResult solve_upper_q3(const SliceQuery& query) {
  const NormalizedDirection nd =
      normalize_direction({query.x(0), query.x(1), query.x(2)});
  if (nd.degenerate) {
    SliceResult res = solve_upper_local(query);
    res.degenerate_path = true;
    return res;
  }
  const Universal3Rep rep = build_rep(nd.a, nd.b);
  const auto atoms = rep_atoms(rep);
  const LpSolution sol = lp_solve(atoms, query.x, query.y, Side::upper);
  if (!sol.feasible)
    throw ConstraintError("infeasible",
                          "scalar atoms span the cube; unreachable");
  SliceResult res;
  res.value = sol.value;
  res.weights = sol.lambda;
  res.achieved_w = achieved_from(atoms, sol.lambda, 3);
  res.realizing_model = realizing_model(rep, sol.lambda);
  res.degenerate_path = !rep.has_m2;
  return res;
}

}  // namespace

SliceResult slice_local(const SliceQuery& query) {
  if (query.n < 1 || query.n > 4)
    throw ConstraintError("questions",
                          "exact local slices are limited to n <= 4");
  check_query_shape(query);
  if (query.side == Side::lower) {
    SliceQuery flipped = query;
    flipped.x = -query.x;
    flipped.side = Side::upper;
    SliceResult res = solve_upper_local(flipped);
    res.value = -res.value;
    return res;
  }
  return solve_upper_local(query);
}

SliceResult slice_q3(const SliceQuery& query) {
  if (query.n != 3)
    throw ConstraintError(
        "questions",
        "exact mode handles n=3 only; use the sampler for other sizes");
  check_query_shape(query);
  if (query.side == Side::lower) {
    // l(y, x) = −u(y, −x); the relations are invariant under negating x,
    // so the same atom set serves both sides.
    SliceQuery flipped = query;
    flipped.x = -query.x;
    flipped.side = Side::upper;
    SliceResult res = solve_upper_q3(flipped);
    res.value = -res.value;
    return res;
  }
  return solve_upper_q3(query);
}

double degenerate_slice_value(const SliceQuery& query) {
  check_query_shape(query);
  bool has_zero = false;
  for (int e = 0; e < query.x.size(); ++e)
    if (query.x(e) == 0.0) has_zero = true;
  if (!has_zero)
    throw ConstraintError(
        "direction",
        "the closed form needs at least one vanishing pair weight");

  double value = 0.0;
  for (int i = 0; i < query.n; ++i) {
    for (int j = i + 1; j < query.n; ++j) {
      const double xe = query.x(pair_index(i, j, query.n));
      if (xe == 0.0) continue;
      const Interval iv = pair_bounds(query.y(i), query.y(j));
      const bool take_hi = (xe > 0.0) == (query.side == Side::upper);
      value += xe * (take_hi ? iv.hi : iv.lo);
    }
  }
  return value;
}

std::vector<DominanceEntry> dominance_check(
    const std::vector<DqSample>& samples,
    const std::vector<SliceQuery>& queries, double delta, Exec exec) {
  const int nq = static_cast<int>(queries.size());
  std::vector<DominanceEntry> out(nq);

  const auto run_query = [&](int qi) {
    const SliceQuery& query = queries[qi];
    const SliceResult res =
        query.cls == CorrClass::q ? slice_q3(query) : slice_local(query);

    DominanceEntry entry;
    entry.query = qi;
    entry.bound = res.value;
    entry.degenerate_path = res.degenerate_path;
    entry.max_excess = std::numeric_limits<double>::quiet_NaN();

    // Moving diagonal coordinate i by Δ moves the slice value by at most
    // Σ_{j≠i} |x_ij| · Δ (replace the i-th projection by a sub- or
    // super-projection with the shifted trace; every pair trace involving
    // it moves by at most Δ). The per-sample allowance sums this over the
    // coordinates, so a sample inside its own class can never show a
    // positive excess. The uniform Σ|x_ij|·δ form undershoots when several
    // coordinates move at once.
    Eigen::VectorXd coord_lipschitz = Eigen::VectorXd::Zero(query.n);
    for (int i = 0; i < query.n; ++i)
      for (int j = i + 1; j < query.n; ++j) {
        const double ax = std::abs(query.x(pair_index(i, j, query.n)));
        coord_lipschitz(i) += ax;
        coord_lipschitz(j) += ax;
      }

    double max_excess = -std::numeric_limits<double>::infinity();
    for (const DqSample& s : samples) {
      if (s.y.size() != query.y.size()) continue;
      if ((s.y - query.y).lpNorm<Eigen::Infinity>() > delta) continue;
      const double v = query.x.dot(s.w);
      const double allowance =
          coord_lipschitz.dot((s.y - query.y).cwiseAbs());
      const double excess = query.side == Side::upper
                                ? v - res.value - allowance
                                : res.value - v - allowance;
      max_excess = std::max(max_excess, excess);
      ++entry.support;
    }
    entry.no_data = entry.support == 0;
    if (!entry.no_data) entry.max_excess = max_excess;
    return entry;
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int qi = 0; qi < nq; ++qi) out[qi] = run_query(qi);
  } else {
    for (int qi = 0; qi < nq; ++qi) out[qi] = run_query(qi);
  }
  return out;
}

}  // namespace syncorr
