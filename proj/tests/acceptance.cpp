// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits with the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "syncorr/correlations.hpp"
#include "syncorr/slices.hpp"
#include "syncorr/tracial.hpp"
#include "syncorr/universal3.hpp"
#include "test_util.hpp"

using namespace syncorr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  std::printf("[%s] %2d %-46s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id,
              name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome check_construction_grid() {
  const auto start = std::chrono::steady_clock::now();
  const auto grid_checks = verify_grid(standard_grid());
  const auto random_checks = verify_grid(random_directions(100, 424242));

  int grid_valid = 0;
  double max_residual = 0.0;
  bool unique = true;
  const auto absorb = [&](const std::vector<GridPointCheck>& checks,
                          int* valid) {
    for (const GridPointCheck& c : checks) {
      if (!c.has_m2) continue;
      if (valid) ++*valid;
      max_residual = std::max(max_residual, c.max_residual);
      if (!(c.loser_residual > 1e-12 || c.branches_coincide)) unique = false;
    }
  };
  absorb(grid_checks, &grid_valid);
  absorb(random_checks, nullptr);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();

  Outcome o;
  o.pass = grid_valid >= 50 && max_residual <= 1e-12 && unique && secs < 1.0;
  o.detail = "grid_valid=" + std::to_string(grid_valid) + "+100 random, " +
             "max_residual=" + fmt(max_residual) +
             (unique ? ", branch unique" : ", BRANCH AMBIGUOUS");
  return o;
}

Outcome check_landmarks() {
  const Universal3Rep r11 = build_rep(1.0, 1.0);
  const Universal3Rep r12 = build_rep(1.0, 2.0);
  double err = std::abs(r11.t - 0.25);
  err = std::max(err, std::abs(r11.z - 0.25));
  for (double off : r11.atoms.back().offdiag)
    err = std::max(err, std::abs(off - 0.125));
  err = std::max(err, std::abs(r12.t - 0.375));
  err = std::max(err, std::abs(r12.z - 0.0625));
  Outcome o;
  o.pass = r11.has_m2 && r12.has_m2 && err <= 1e-14;
  o.detail = "max_error=" + fmt(err);
  return o;
}

Outcome check_gap() {
  const auto start = std::chrono::steady_clock::now();
  SliceQuery q;
  q.n = 3;
  q.y = Eigen::Vector3d(.5, .5, .5);
  q.x = Eigen::Vector3d(1, 1, 1);
  q.side = Side::lower;
  q.cls = CorrClass::q;
  const double lq = slice_q3(q).value;
  q.cls = CorrClass::loc;
  const double lloc = slice_local(q).value;
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const double err = std::max({std::abs(lq - 0.375), std::abs(lloc - 0.5),
                               std::abs((lloc - lq) - 0.125)});
  Outcome o;
  o.pass = err <= 1e-12 && secs < 0.1;
  o.detail = "l_q=" + fmt(lq) + " l_loc=" + fmt(lloc) +
             " error=" + fmt(err);
  return o;
}

Outcome check_dominance() {
  const auto start = std::chrono::steady_clock::now();
  auto samples = sample_dq(3, 4, 100000, 20250301);

  const Universal3Rep rep = build_rep(1.0, 1.0);
  std::vector<double> pure(9, 0.0);
  pure[8] = 1.0;
  samples.push_back(model_sample(realizing_model(rep, pure)));

  std::vector<SliceQuery> queries;
  Rng rng(987654321);
  while (queries.size() < 198) {
    SliceQuery q;
    q.n = 3;
    q.y.resize(3);
    for (int i = 0; i < 3; ++i) q.y(i) = 0.1 + 0.8 * rng.uniform();
    q.x.resize(3);
    for (int e = 0; e < 3; ++e) {
      const double mag = 0.2 + 1.8 * rng.uniform();
      q.x(e) = rng.uniform() < 0.5 ? -mag : mag;
    }
    q.cls = CorrClass::q;
    q.side = queries.size() % 2 ? Side::lower : Side::upper;
    queries.push_back(std::move(q));
  }
  SliceQuery landmark;
  landmark.n = 3;
  landmark.y = Eigen::Vector3d(.5, .5, .5);
  landmark.x = Eigen::Vector3d(1, 1, 1);
  landmark.cls = CorrClass::q;
  landmark.side = Side::lower;
  queries.push_back(landmark);
  landmark.x = Eigen::Vector3d(-1, -1, -1);
  landmark.side = Side::upper;
  queries.push_back(landmark);

  const auto entries = dominance_check(samples, queries, 0.05);
  double max_excess = -1e300;
  int with_data = 0;
  for (const DominanceEntry& e : entries) {
    if (e.no_data) continue;
    ++with_data;
    max_excess = std::max(max_excess, e.max_excess);
  }

  bool attained = false;
  const Eigen::Vector3d center(.5, .5, .5);
  for (const DqSample& s : samples) {
    if ((s.y - center).lpNorm<Eigen::Infinity>() > 1e-9) continue;
    if (std::abs(s.w.sum() - 0.375) <= 5e-3) attained = true;
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  Outcome o;
  o.pass = max_excess <= 1e-9 && attained && secs < 60.0;
  o.detail = "samples=" + std::to_string(samples.size()) +
             " queries=200 with_data=" + std::to_string(with_data) +
             " max_excess=" + fmt(max_excess) +
             (attained ? " landmark attained" : " LANDMARK MISSED");
  return o;
}

Outcome check_degenerate_agreement() {
  Rng rng(5551212);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    SliceQuery q;
    q.n = 3;
    q.y.resize(3);
    for (int i = 0; i < 3; ++i) q.y(i) = rng.uniform();
    q.x.setZero(3);
    const int zeros = rng.uniform_int(1, 2);
    std::array<int, 3> order = {0, 1, 2};
    std::swap(order[0], order[rng.uniform_int(0, 2)]);
    std::swap(order[1], order[1 + rng.uniform_int(0, 1)]);
    for (int e = zeros; e < 3; ++e) {
      const double mag = 0.2 + 1.8 * rng.uniform();
      q.x(order[e]) = rng.uniform() < 0.5 ? -mag : mag;
    }
    q.cls = CorrClass::q;
    q.side = k % 2 ? Side::lower : Side::upper;

    const double vq = slice_q3(q).value;
    const double vloc = slice_local(q).value;
    const double closed = degenerate_slice_value(q);
    worst = std::max(worst, std::abs(vq - vloc));
    worst = std::max(worst, std::abs(vq - closed));
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = "100 degenerate queries, max_diff=" + fmt(worst);
  return o;
}

Outcome check_round_trips() {
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    Rng rng = Rng::stream(31415, k);
    const TracialModel model =
        random_model(2 + rng.uniform_int(0, 2), 2, 3, rng);
    const CorrelationTensor t = synthesize(model);
    const RestrictResult r = restrict_to_matrix(t);
    worst = std::max(worst, testutil::max_abs_diff(expand(r.matrix), t));
  }
  for (int k = 0; k < 500; ++k) {
    Rng rng = Rng::stream(27182, k);
    const TracialModel model = random_model(1 + rng.uniform_int(0, 2),
                                            2 + rng.uniform_int(0, 2), 3, rng);
    const CorrelationTensor q = synthesize(model);
    const ProjectionReport pr = project_outcomes(embed_outcomes(q), q.n, q.m);
    if (!pr.in_class) return {false, "projection left the class"};
    worst = std::max(worst, testutil::max_abs_diff(*pr.tensor, q));
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = "1000 synthesized correlations, max_residual=" + fmt(worst);
  return o;
}

Outcome check_perturbation() {
  const BlockAlgebra alg{{4}};
  const TracialState st{{1.0}};
  double worst_rel = 0.0;
  double min_comm = 1e300;
  for (int k = 0; k < 100; ++k) {
    Rng rng = Rng::stream(16180, k);
    const auto hermitian = [&] {
      Matrix m(4, 4);
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          m(r, c) = Complex(rng.normal(), rng.normal());
      m = 0.5 * (m + Matrix(m.adjoint()));
      m /= op_norm(m);
      BlockOperator op;
      op.hermitian = true;
      op.blocks.push_back(std::move(m));
      return op;
    };
    BlockOperator a = hermitian();
    BlockOperator b = hermitian();
    while (op_norm(commutator(a, b)) <= 1e-6) b = hermitian();
    min_comm = std::min(min_comm, op_norm(commutator(a, b)));

    const ImprovingDirection dir = improving_direction(alg, st, a, b);
    if (!(dir.derivative > 0.0)) return {false, "derivative not positive"};
    const double h = 1e-4;
    const double fd = (conjugated_pair_trace(alg, st, a, b, dir.h, h) -
                       conjugated_pair_trace(alg, st, a, b, dir.h, -h)) /
                      (2.0 * h);
    worst_rel =
        std::max(worst_rel, std::abs(fd - dir.derivative) / dir.derivative);
  }
  Outcome o;
  o.pass = worst_rel <= 1e-6;
  o.detail = "100 pairs, max_rel_fd_error=" + fmt(worst_rel) +
             " min_comm=" + fmt(min_comm);
  return o;
}

Outcome check_orthogonality_numerics() {
  double worst_product = 0.0, worst_pvm = 0.0;
  for (int k = 0; k < 50; ++k) {
    Rng rng = Rng::stream(60221, k);

    // Blockwise-orthogonal rank-1 pairs: the trace pairing vanishes by
    // construction, the lemma then forces the operator product to vanish.
    BlockAlgebra alg{{rng.uniform_int(2, 4), rng.uniform_int(2, 4)}};
    TracialState st{{0.3 + 0.4 * rng.uniform(), 0.0}};
    st.weights[1] = 1.0 - st.weights[0];
    std::vector<BlockOperator> pair(2);
    for (int blk = 0; blk < 2; ++blk) {
      const Matrix u = random_unitary(alg.dims[blk], rng);
      Matrix p0 = u.col(0) * u.col(0).adjoint();
      Matrix p1 = u.col(1) * u.col(1).adjoint();
      pair[0].blocks.push_back(0.5 * (p0 + Matrix(p0.adjoint())));
      pair[1].blocks.push_back(0.5 * (p1 + Matrix(p1.adjoint())));
    }
    const OrthogonalityVerdict v = orthogonality_to_pvm(alg, st, pair, 1e-12);
    if (!v.hypothesis_met) return {false, "pairing unexpectedly nonzero"};
    worst_product = std::max(worst_product, v.max_product_norm);

    // Full measurements: pair sums equal one, the sum defect must vanish.
    const TracialModel model = random_model(1, 3, 4, rng);
    const OrthogonalityVerdict w = orthogonality_to_pvm(
        model.algebra, model.trace, model.pvms[0], 1e-12);
    if (!w.sum_hypothesis_met) return {false, "pair sums differ from one"};
    worst_pvm = std::max(worst_pvm, w.pvm_defect);
  }
  Outcome o;
  o.pass = worst_product <= 1e-6 && worst_pvm <= 1e-6;
  o.detail = "max_product_norm=" + fmt(worst_product) +
             " max_pvm_defect=" + fmt(worst_pvm);
  return o;
}

Outcome check_fixture_decomposition() {
  const CorrelationTensor lhs =
      expand(testutil::pair_matrix(testutil::fixture_p()));
  const CorrelationTensor q4 =
      expand(testutil::pair_matrix(testutil::fixture_q()));
  const CorrelationTensor s4 =
      expand(testutil::pair_matrix(testutil::fixture_s()));
  double residual = 0.0;
  for (std::size_t k = 0; k < lhs.p.size(); ++k)
    residual = std::max(residual,
                        std::abs(lhs.p[k] - 0.5 * (q4.p[k] + s4.p[k])));
  const bool halves_invalid =
      !validate(testutil::fixture_q()).is_correlation &&
      !validate(testutil::fixture_s()).is_correlation;
  const bool lifted_valid = validate(q4).all() && validate(s4).all();
  Outcome o;
  o.pass = residual == 0.0 && halves_invalid && lifted_valid;
  o.detail = "identity residual=" + fmt(residual) +
             (halves_invalid ? ", halves invalid as tensors" : ", HALVES VALID?");
  return o;
}

Outcome check_central_element() {
  auto points = standard_grid();
  const auto extra = random_directions(100, 424242);
  points.insert(points.end(), extra.begin(), extra.end());
  double worst = 0.0;
  int reps = 0;
  for (const GridPointCheck& c : verify_grid(points)) {
    if (!c.has_m2) continue;
    ++reps;
    worst = std::max(worst, c.central_residual);
  }
  Outcome o;
  o.pass = worst <= 1e-12 && reps > 0;
  o.detail = std::to_string(reps) + " reps, max_residual=" + fmt(worst);
  return o;
}

}  // namespace

int main() {
  criterion(1, "two-projection construction on the grid",
            check_construction_grid);
  criterion(2, "landmark parameters and trace atoms", check_landmarks);
  criterion(3, "quantum-local slice gap 1/8", check_gap);
  criterion(4, "sampling dominance and landmark attainment", check_dominance);
  criterion(5, "degenerate directions match the local value",
            check_degenerate_agreement);
  criterion(6, "mapping round trips", check_round_trips);
  criterion(7, "conjugation derivative vs finite differences",
            check_perturbation);
  criterion(8, "trace orthogonality numerics", check_orthogonality_numerics);
  criterion(9, "mixture fixture decomposes exactly",
            check_fixture_decomposition);
  criterion(10, "central element commutes on constructed reps",
            check_central_element);

  if (failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria failed\n", failures);
  return failures;
}
