#include "syncorr/tracial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace syncorr {

int BlockAlgebra::total_dim() const {
  return std::accumulate(dims.begin(), dims.end(), 0);
}

namespace {

void check_compatible(const BlockAlgebra& algebra, const BlockOperator& x,
                      const char* what) {
  if (static_cast<int>(x.blocks.size()) != algebra.block_count())
    throw ConstraintError("shape", std::string(what) + ": block count mismatch");
  for (int k = 0; k < algebra.block_count(); ++k) {
    if (x.blocks[k].rows() != algebra.dims[k] ||
        x.blocks[k].cols() != algebra.dims[k])
      throw ConstraintError("shape",
                            std::string(what) + ": block dimension mismatch");
  }
}

void check_same_shape(const BlockOperator& a, const BlockOperator& b) {
  if (a.blocks.size() != b.blocks.size())
    throw ConstraintError("shape", "operator block counts differ");
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    if (a.blocks[k].rows() != b.blocks[k].rows())
      throw ConstraintError("shape", "operator block dimensions differ");
}

BlockOperator zip(const BlockOperator& a, const BlockOperator& b,
                  Matrix (*f)(const Matrix&, const Matrix&)) {
  check_same_shape(a, b);
  BlockOperator out;
  out.blocks.reserve(a.blocks.size());
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    out.blocks.push_back(f(a.blocks[k], b.blocks[k]));
  return out;
}

}  // namespace

BlockOperator block_identity(const BlockAlgebra& algebra) {
  BlockOperator out;
  out.hermitian = true;
  out.projection = true;
  for (int d : algebra.dims) out.blocks.push_back(Matrix::Identity(d, d));
  return out;
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  return zip(a, b, +[](const Matrix& x, const Matrix& y) -> Matrix { return x + y; });
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  return zip(a, b, +[](const Matrix& x, const Matrix& y) -> Matrix { return x - y; });
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  return zip(a, b, +[](const Matrix& x, const Matrix& y) -> Matrix { return x * y; });
}

BlockOperator operator*(double s, const BlockOperator& a) {
  BlockOperator out;
  out.blocks.reserve(a.blocks.size());
  for (const Matrix& x : a.blocks) out.blocks.push_back(s * x);
  return out;
}

BlockOperator adjoint(const BlockOperator& a) {
  BlockOperator out;
  out.blocks.reserve(a.blocks.size());
  for (const Matrix& x : a.blocks) out.blocks.push_back(x.adjoint());
  return out;
}

BlockOperator commutator(const BlockOperator& a, const BlockOperator& b) {
  check_same_shape(a, b);
  BlockOperator out;
  out.blocks.reserve(a.blocks.size());
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    out.blocks.push_back(a.blocks[k] * b.blocks[k] - b.blocks[k] * a.blocks[k]);
  return out;
}

double op_norm(const BlockOperator& a) {
  double norm = 0.0;
  for (const Matrix& x : a.blocks) norm = std::max(norm, op_norm(x));
  return norm;
}

Complex trace_of(const BlockAlgebra& algebra, const TracialState& state,
                 const BlockOperator& x) {
  check_compatible(algebra, x, "trace");
  if (state.weights.size() != algebra.dims.size())
    throw ConstraintError("shape", "trace weight count mismatch");
  Complex out = 0.0;
  for (int k = 0; k < algebra.block_count(); ++k)
    out += state.weights[k] * x.blocks[k].trace() /
           static_cast<double>(algebra.dims[k]);
  return out;
}

Complex trace_pair(const BlockAlgebra& algebra, const TracialState& state,
                   const BlockOperator& x, const BlockOperator& y) {
  check_compatible(algebra, x, "trace");
  check_compatible(algebra, y, "trace");
  Complex out = 0.0;
  for (int k = 0; k < algebra.block_count(); ++k) {
    // tr(XY) = Σ_{r,c} X(r,c) Y(c,r)
    const Complex t = (x.blocks[k].transpose().cwiseProduct(y.blocks[k])).sum();
    out += state.weights[k] * t / static_cast<double>(algebra.dims[k]);
  }
  return out;
}

void check_model(const TracialModel& model, double tol, int max_total_dim) {
  const BlockAlgebra& alg = model.algebra;
  if (alg.dims.empty())
    throw ConstraintError("algebra", "algebra has no blocks");
  for (int d : alg.dims)
    if (d < 1) throw ConstraintError("algebra", "block dimension must be positive");
  if (alg.total_dim() > max_total_dim) {
    std::ostringstream os;
    os << "total block dimension " << alg.total_dim() << " exceeds cap "
       << max_total_dim;
    throw ConstraintError("algebra", os.str());
  }
  if (model.trace.weights.size() != alg.dims.size())
    throw ConstraintError("trace", "one weight per block required");
  double sum = 0.0;
  for (double w : model.trace.weights) {
    if (w < -tol) throw ConstraintError("trace", "negative trace weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol)
    throw ConstraintError("trace", "trace weights must sum to 1");

  if (model.pvms.empty())
    throw ConstraintError("pvm", "model has no questions");
  const int m = static_cast<int>(model.pvms[0].size());
  for (int x = 0; x < model.questions(); ++x) {
    const auto& pvm = model.pvms[x];
    if (static_cast<int>(pvm.size()) != m)
      throw ConstraintError("pvm", "outcome counts differ across questions");
    if (m < 1) throw ConstraintError("pvm", "empty measurement");
    for (const BlockOperator& op : pvm) check_compatible(alg, op, "pvm");

    for (int k = 0; k < alg.block_count(); ++k) {
      double res = 0.0;
      Matrix sumk = Matrix::Zero(alg.dims[k], alg.dims[k]);
      for (int i = 0; i < m; ++i) {
        res = std::max(res, projection_residual(pvm[i].blocks[k]));
        sumk += pvm[i].blocks[k];
        for (int j = i + 1; j < m; ++j)
          res = std::max(res, op_norm(pvm[i].blocks[k] * pvm[j].blocks[k]));
      }
      res = std::max(
          res, op_norm(sumk - Matrix::Identity(alg.dims[k], alg.dims[k])));
      if (res > tol) {
        std::ostringstream os;
        os << "question " << x << " block " << k
           << " violates the measurement axioms, residual " << res;
        throw ConstraintError("pvm", os.str());
      }
    }
  }
}

CorrelationTensor synthesize(const TracialModel& model, double tol) {
  check_model(model, tol);
  const int n = model.questions();
  const int m = model.outcomes();
  CorrelationTensor t(n, m);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          t.at(x, y, i, j) =
              model.trace_pair(model.pvms[x][i], model.pvms[y][j]).real();
  return t;
}

namespace {

Matrix random_projection_matrix(int d, int rank, Rng& rng) {
  if (rank == 0) return Matrix::Zero(d, d);
  if (rank == d) return Matrix::Identity(d, d);
  const Matrix u = random_unitary(d, rng);
  Matrix p = u.leftCols(rank) * u.leftCols(rank).adjoint();
  p = 0.5 * (p + Matrix(p.adjoint()));
  return p;
}

std::vector<Matrix> random_pvm_matrices(int d, int m, Rng& rng) {
  std::vector<int> part(d);
  for (int v = 0; v < d; ++v) part[v] = rng.uniform_int(0, m - 1);
  const Matrix u = random_unitary(d, rng);
  std::vector<Matrix> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXcd diag = Eigen::VectorXcd::Zero(d);
    for (int v = 0; v < d; ++v)
      if (part[v] == i) diag(v) = 1.0;
    Matrix p = u * diag.asDiagonal() * u.adjoint();
    p = 0.5 * (p + Matrix(p.adjoint()));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

BlockOperator random_projection(int d, int rank, std::uint64_t seed) {
  if (d < 1) throw ConstraintError("shape", "dimension must be positive");
  if (rank < 0 || rank > d)
    throw ConstraintError("rank", "rank must lie in [0, d]");
  Rng rng(seed);
  BlockOperator out;
  out.hermitian = true;
  out.projection = true;
  out.blocks.push_back(random_projection_matrix(d, rank, rng));
  return out;
}

std::vector<BlockOperator> random_pvm(int d, int m, std::uint64_t seed) {
  if (d < 1) throw ConstraintError("shape", "dimension must be positive");
  if (m < 1) throw ConstraintError("outcomes", "need at least one outcome");
  Rng rng(seed);
  std::vector<BlockOperator> out;
  for (Matrix& p : random_pvm_matrices(d, m, rng)) {
    BlockOperator op;
    op.hermitian = true;
    op.projection = true;
    op.blocks.push_back(std::move(p));
    out.push_back(std::move(op));
  }
  return out;
}

OrthogonalityVerdict orthogonality_to_pvm(
    const BlockAlgebra& algebra, const TracialState& state,
    const std::vector<BlockOperator>& projections, double tol) {
  if (!state.faithful())
    throw ConstraintError("faithful",
                          "the trace must be faithful (all weights positive)");
  for (const BlockOperator& p : projections)
    check_compatible(algebra, p, "orthogonality");

  OrthogonalityVerdict v;
  for (int k = 0; k < algebra.block_count(); ++k)
    v.bound_constant =
        std::max(v.bound_constant,
                 std::sqrt(algebra.dims[k] / state.weights[k]));
  v.product_bound = v.bound_constant * std::sqrt(tol);

  const int m = static_cast<int>(projections.size());
  double pair_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double tp =
          trace_pair(algebra, state, projections[i], projections[j]).real();
      pair_sum += tp;
      if (i != j) {
        v.max_trace_pair = std::max(v.max_trace_pair, std::abs(tp));
        v.max_product_norm =
            std::max(v.max_product_norm, op_norm(projections[i] * projections[j]));
      }
    }
  }
  v.hypothesis_met = v.max_trace_pair <= tol;
  v.sum_residual = std::abs(pair_sum - 1.0);
  v.sum_hypothesis_met = v.hypothesis_met && v.sum_residual <= tol;

  BlockOperator sum = projections.empty() ? block_identity(algebra)
                                          : projections[0];
  for (int i = 1; i < m; ++i) sum = sum + projections[i];
  v.pvm_defect = op_norm(sum - block_identity(algebra));
  return v;
}

double commutator_defect(const TracialModel& model,
                         const std::vector<double>& pair_weights) {
  const int n = model.questions();
  if (model.outcomes() != 2)
    throw ConstraintError("outcomes",
                          "commutator defect is defined for two-outcome models");
  if (static_cast<int>(pair_weights.size()) != pair_count(n))
    throw ConstraintError("shape", "one weight per question pair required");

  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    BlockOperator s = 0.0 * model.pvms[i][0];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double x =
          pair_weights[pair_index(std::min(i, j), std::max(i, j), n)];
      s = s + x * model.pvms[j][0];
    }
    defect = std::max(defect, op_norm(commutator(model.pvms[i][0], s)));
  }
  return defect;
}

ImprovingDirection improving_direction(const BlockAlgebra& algebra,
                                       const TracialState& state,
                                       const BlockOperator& a,
                                       const BlockOperator& b) {
  check_compatible(algebra, a, "improving direction");
  check_compatible(algebra, b, "improving direction");
  constexpr double kHermTol = 1e-10;
  for (const BlockOperator* op : {&a, &b}) {
    for (const Matrix& blk : op->blocks)
      if (hermiticity_residual(blk) > kHermTol)
        throw ConstraintError("hermitian", "inputs must be hermitian");
  }

  // H = i[B,A]; then f'(0) = τ([B,A]*[B,A]) = τ(H²) ≥ 0.
  ImprovingDirection out;
  out.h.hermitian = true;
  const BlockOperator c = commutator(b, a);
  for (const Matrix& blk : c.blocks)
    out.h.blocks.push_back(Complex(0.0, 1.0) * blk);
  out.derivative = trace_pair(algebra, state, out.h, out.h).real();
  return out;
}

double conjugated_pair_trace(const BlockAlgebra& algebra,
                             const TracialState& state, const BlockOperator& a,
                             const BlockOperator& b, const BlockOperator& h,
                             double t) {
  check_compatible(algebra, h, "conjugated trace");
  Complex out = 0.0;
  for (int k = 0; k < algebra.block_count(); ++k) {
    const Matrix u = unitary_exp(h.blocks[k], t);
    const Complex tr =
        (a.blocks[k] * u * b.blocks[k] * u.adjoint()).trace();
    out += state.weights[k] * tr / static_cast<double>(algebra.dims[k]);
  }
  return out.real();
}

namespace {

BlockAlgebra random_algebra(int max_dim, Rng& rng, TracialState* state) {
  BlockAlgebra alg;
  const int blocks = rng.uniform_int(1, 3);
  alg.dims.resize(blocks);
  for (int k = 0; k < blocks; ++k) alg.dims[k] = rng.uniform_int(1, max_dim);

  state->weights.resize(blocks);
  double sum = 0.0;
  for (int k = 0; k < blocks; ++k) {
    // Exponential spacings give a uniform point of the simplex.
    double u;
    do {
      u = rng.uniform();
    } while (u <= 0.0);
    state->weights[k] = -std::log(u);
    sum += state->weights[k];
  }
  for (double& w : state->weights) w /= sum;
  return alg;
}

}  // namespace

TracialModel random_model(int questions, int outcomes, int max_dim, Rng& rng) {
  if (questions < 1 || outcomes < 1 || max_dim < 1)
    throw ConstraintError("shape", "model parameters must be positive");
  TracialModel model;
  model.algebra = random_algebra(max_dim, rng, &model.trace);
  model.pvms.resize(questions);
  for (int x = 0; x < questions; ++x) {
    std::vector<BlockOperator> pvm(outcomes);
    for (int i = 0; i < outcomes; ++i) {
      pvm[i].hermitian = true;
      pvm[i].projection = true;
    }
    for (int d : model.algebra.dims) {
      auto mats = random_pvm_matrices(d, outcomes, rng);
      for (int i = 0; i < outcomes; ++i)
        pvm[i].blocks.push_back(std::move(mats[i]));
    }
    model.pvms[x] = std::move(pvm);
  }
  return model;
}

TracialModel random_projection_model(int questions, int max_dim, Rng& rng) {
  if (questions < 1 || max_dim < 1)
    throw ConstraintError("shape", "model parameters must be positive");
  TracialModel model;
  model.algebra = random_algebra(max_dim, rng, &model.trace);
  model.pvms.resize(questions);
  for (int x = 0; x < questions; ++x) {
    BlockOperator p;
    p.hermitian = true;
    p.projection = true;
    for (int d : model.algebra.dims) {
      const int rank = rng.uniform_int(0, d);
      p.blocks.push_back(random_projection_matrix(d, rank, rng));
    }
    BlockOperator q = block_identity(model.algebra) - p;
    q.hermitian = true;
    q.projection = true;
    model.pvms[x] = {std::move(p), std::move(q)};
  }
  return model;
}

DqSample model_sample(const TracialModel& model) {
  const int n = model.questions();
  DqSample s;
  s.y.resize(n);
  s.w.resize(pair_count(n));
  for (int i = 0; i < n; ++i)
    s.y(i) = model.trace_of(model.pvms[i][0]).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      s.w(pair_index(i, j, n)) =
          model.trace_pair(model.pvms[i][0], model.pvms[j][0]).real();
  return s;
}

std::vector<DqSample> sample_dq(int n, int max_dim, int count,
                                std::uint64_t seed, Exec exec) {
  if (n < 1 || max_dim < 1 || count < 0)
    throw ConstraintError("shape", "sampler parameters must be positive");
  std::vector<DqSample> samples(count);

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int i = 0; i < count; ++i) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
      samples[i] = model_sample(random_projection_model(n, max_dim, rng));
    }
  } else {
    for (int i = 0; i < count; ++i) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
      samples[i] = model_sample(random_projection_model(n, max_dim, rng));
    }
  }
  return samples;
}

}  // namespace syncorr
