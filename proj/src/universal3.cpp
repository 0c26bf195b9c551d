#include "syncorr/universal3.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace syncorr {

namespace {

double norm2x2(const Eigen::Matrix2d& m) {
  return m.jacobiSvd().singularValues()(0);
}

Eigen::Matrix2d second_relation(const Eigen::Matrix2d& mat_a,
                                const Eigen::Matrix2d& mat_b,
                                const Eigen::Matrix2d& mat_c, double a) {
  const Eigen::Matrix2d s = a * mat_a + mat_c;
  return mat_b * s - s * mat_b;
}

Eigen::Matrix2d c_matrix(double z, double a, double b, double s) {
  Eigen::Matrix2d c;
  c << z, -(a / b) * s, -(a / b) * s, 1.0 - z;
  return c;
}

TraceAtom scalar_atom(int alpha, int beta, int gamma) {
  TraceAtom atom;
  atom.is_m2 = false;
  atom.bits = {alpha, beta, gamma};
  atom.diag = {double(alpha), double(beta), double(gamma)};
  atom.offdiag = {double(alpha * beta), double(alpha * gamma),
                  double(beta * gamma)};
  return atom;
}

}  // namespace

NormalizedDirection normalize_direction(const Direction3& x) {
  NormalizedDirection out;
  out.vanishes = {x.a == 0.0, x.b == 0.0, x.c == 0.0};
  out.degenerate = out.vanishes[0] || out.vanishes[1] || out.vanishes[2];
  if (!out.degenerate) {
    out.a = x.a / x.c;
    out.b = x.b / x.c;
  }
  return out;
}

Universal3Rep build_rep(double a, double b) {
  if (a == 0.0 || b == 0.0)
    throw ConstraintError("direction", "a and b must be nonzero");

  Universal3Rep rep;
  rep.a = a;
  rep.b = b;
  rep.t = (b * b + 2.0 * a * a * b - a * a * b * b - a * a) / (4.0 * a * a * b);

  // Scalar atoms in direct-sum order: the projection triples run through
  // (1,1,1), (1,1,0), ..., (0,0,0).
  for (int k = 0; k < 8; ++k)
    rep.atoms.push_back(scalar_atom(1 - ((k >> 2) & 1), 1 - ((k >> 1) & 1),
                                    1 - (k & 1)));

  const double t = rep.t;
  if (!(t > 0.0 && t < 1.0)) {
    rep.has_m2 = false;
    return rep;
  }

  double disc = 1.0 - (4.0 * a * a / (b * b)) * t * (1.0 - t);
  if (disc < 0.0 && disc > -1e-12) disc = 0.0;
  rep.disc = disc;
  if (disc < 0.0) {
    rep.has_m2 = false;
    return rep;
  }
  rep.has_m2 = true;

  const double s = std::sqrt(t * (1.0 - t));
  rep.A << 1.0, 0.0, 0.0, 0.0;
  rep.B << t, s, s, 1.0 - t;

  const double root = std::sqrt(disc);
  const double z_plus = 0.5 + 0.5 * root;
  const double z_minus = 0.5 - 0.5 * root;
  const double res_plus =
      norm2x2(second_relation(rep.A, rep.B, c_matrix(z_plus, a, b, s), a));
  const double res_minus =
      norm2x2(second_relation(rep.A, rep.B, c_matrix(z_minus, a, b, s), a));

  rep.branches_coincide = disc < 1e-24;
  if (res_plus <= res_minus) {
    rep.z = z_plus;
    rep.z_other = z_minus;
    rep.winner_residual = res_plus;
    rep.loser_residual = res_minus;
  } else {
    rep.z = z_minus;
    rep.z_other = z_plus;
    rep.winner_residual = res_minus;
    rep.loser_residual = res_plus;
  }
  rep.C = c_matrix(rep.z, a, b, s);

  TraceAtom m2;
  m2.is_m2 = true;
  m2.diag = {0.5, 0.5, 0.5};
  m2.offdiag = {0.5 * (rep.A * rep.B).trace(), 0.5 * (rep.A * rep.C).trace(),
                0.5 * (rep.B * rep.C).trace()};
  rep.atoms.push_back(m2);
  return rep;
}

double RepReport::max_residual() const {
  return std::max({proj_residual_a, proj_residual_b, proj_residual_c,
                   relation_residual_1, relation_residual_2,
                   relation_residual_3});
}

RepReport verify_rep(const Universal3Rep& rep) {
  if (!rep.has_m2)
    throw ConstraintError("representation",
                          "no two-dimensional block for this direction");
  RepReport r;
  const auto proj = [](const Eigen::Matrix2d& m) {
    return std::max(norm2x2(m * m - m),
                    norm2x2(m - Eigen::Matrix2d(m.transpose())));
  };
  r.proj_residual_a = proj(rep.A);
  r.proj_residual_b = proj(rep.B);
  r.proj_residual_c = proj(rep.C);

  const Eigen::Matrix2d s1 = rep.a * rep.B + rep.b * rep.C;
  r.relation_residual_1 = norm2x2(rep.A * s1 - s1 * rep.A);
  r.relation_residual_2 =
      norm2x2(second_relation(rep.A, rep.B, rep.C, rep.a));
  const Eigen::Matrix2d s3 = rep.b * rep.A + rep.B;
  r.relation_residual_3 = norm2x2(rep.C * s3 - s3 * rep.C);
  return r;
}

CorrelationMatrix correlation_from_trace(const Universal3Rep& rep,
                                         const std::vector<double>& weights) {
  if (weights.size() != rep.atoms.size())
    throw ConstraintError("weights", "one weight per trace atom required");
  double sum = 0.0;
  for (double w : weights) {
    if (w < -1e-12)
      throw ConstraintError("weights", "atom weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConstraintError("weights", "atom weights must sum to 1");

  CorrelationMatrix mat;
  mat.n = 3;
  mat.w.setZero(3, 3);
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const TraceAtom& atom = rep.atoms[k];
    for (int i = 0; i < 3; ++i) mat.w(i, i) += weights[k] * atom.diag[i];
    mat.w(0, 1) += weights[k] * atom.offdiag[0];
    mat.w(0, 2) += weights[k] * atom.offdiag[1];
    mat.w(1, 2) += weights[k] * atom.offdiag[2];
  }
  mat.w(1, 0) = mat.w(0, 1);
  mat.w(2, 0) = mat.w(0, 2);
  mat.w(2, 1) = mat.w(1, 2);
  return mat;
}

TracialModel realizing_model(const Universal3Rep& rep,
                             const std::vector<double>& weights) {
  if (weights.size() != rep.atoms.size())
    throw ConstraintError("weights", "one weight per trace atom required");

  TracialModel model;
  std::vector<std::array<Matrix, 3>> blocks;  // per kept atom: P_A, P_B, P_C
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) continue;
    const TraceAtom& atom = rep.atoms[k];
    model.trace.weights.push_back(weights[k]);
    if (atom.is_m2) {
      model.algebra.dims.push_back(2);
      blocks.push_back({rep.A.cast<Complex>(), rep.B.cast<Complex>(),
                        rep.C.cast<Complex>()});
    } else {
      model.algebra.dims.push_back(1);
      std::array<Matrix, 3> scal;
      for (int q = 0; q < 3; ++q) {
        scal[q] = Matrix(1, 1);
        scal[q](0, 0) = static_cast<double>(atom.bits[q]);
      }
      blocks.push_back(std::move(scal));
    }
  }
  if (model.algebra.dims.empty())
    throw ConstraintError("weights", "all atom weights are zero");

  model.pvms.resize(3);
  const BlockOperator id = block_identity(model.algebra);
  for (int q = 0; q < 3; ++q) {
    BlockOperator p;
    p.hermitian = true;
    p.projection = true;
    for (auto& blk : blocks) p.blocks.push_back(blk[q]);
    BlockOperator comp = id - p;
    comp.hermitian = true;
    comp.projection = true;
    model.pvms[q] = {std::move(p), std::move(comp)};
  }
  return model;
}

double central_element_residual(const Universal3Rep& rep) {
  if (!rep.has_m2) return 0.0;
  const Eigen::Matrix2d d = rep.a * rep.B + rep.b * rep.C;
  const Eigen::Matrix2d h = d * d - (rep.a + rep.b) * d;
  double res = 0.0;
  for (const Eigen::Matrix2d* x : {&rep.A, &rep.B, &rep.C})
    res = std::max(res, norm2x2(h * (*x) - (*x) * h));
  return res;
}

namespace {

GridPointCheck check_point(double a, double b) {
  GridPointCheck c;
  c.a = a;
  c.b = b;
  const Universal3Rep rep = build_rep(a, b);
  c.has_m2 = rep.has_m2;
  if (rep.has_m2) {
    c.max_residual = verify_rep(rep).max_residual();
    c.loser_residual = rep.loser_residual;
    c.branches_coincide = rep.branches_coincide;
    c.central_residual = central_element_residual(rep);
  }
  return c;
}

}  // namespace

std::vector<GridPointCheck> verify_grid(
    const std::vector<std::pair<double, double>>& points, Exec exec) {
  const int count = static_cast<int>(points.size());
  std::vector<GridPointCheck> out(count);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < count; ++i)
      out[i] = check_point(points[i].first, points[i].second);
  } else {
    for (int i = 0; i < count; ++i)
      out[i] = check_point(points[i].first, points[i].second);
  }
  return out;
}

std::vector<std::pair<double, double>> standard_grid() {
  static const double vals[] = {-3.0, -2.0, -1.5, -1.0, -0.75, -0.5, -0.25,
                                0.25, 0.5,  0.75, 1.0,  1.5,   2.0,  3.0};
  std::vector<std::pair<double, double>> out;
  for (double a : vals)
    for (double b : vals) out.emplace_back(a, b);
  return out;
}

std::vector<std::pair<double, double>> random_directions(int count,
                                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    const double a = -3.0 + 6.0 * rng.uniform();
    const double b = -3.0 + 6.0 * rng.uniform();
    if (std::abs(a) < 0.05 || std::abs(b) < 0.05) continue;
    if (build_rep(a, b).has_m2) out.emplace_back(a, b);
  }
  return out;
}

}  // namespace syncorr
