#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "syncorr/slices.hpp"

using namespace syncorr;

namespace {

SliceQuery make_query(double y0, double y1, double y2, double x01, double x02,
                      double x12, CorrClass cls, Side side) {
  SliceQuery q;
  q.n = 3;
  q.y = Eigen::Vector3d(y0, y1, y2);
  q.x = Eigen::Vector3d(x01, x02, x12);
  q.cls = cls;
  q.side = side;
  return q;
}

void check_result_consistency(const SliceQuery& q, const SliceResult& r,
                              double tol = 1e-10) {
  CHECK(std::abs(q.x.dot(r.achieved_w) - r.value) <= tol);
  const DqSample s = model_sample(r.realizing_model);
  CHECK((s.y - q.y).lpNorm<Eigen::Infinity>() <= tol);
  CHECK((s.w - r.achieved_w).lpNorm<Eigen::Infinity>() <= tol);
  std::vector<double> weights(q.x.data(), q.x.data() + q.x.size());
  CHECK(commutator_defect(r.realizing_model, weights) <= tol);
}

}  // namespace

TEST_CASE("pair bounds and their interval witnesses") {
  const Interval i1 = pair_bounds(0.7, 0.6);
  CHECK(i1.lo == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(i1.hi == 0.6);

  const Interval i2 = pair_bounds(0.5, 0.5);
  CHECK(i2.lo == 0.0);
  CHECK(i2.hi == 0.5);

  for (double t : {0.0, 0.3, 1.0}) {
    const Interval i3 = pair_bounds(1.0, t);
    CHECK(std::abs(i3.lo - t) <= 1e-15);  // (1 + t) − 1 rounds
    CHECK(i3.hi == t);
  }

  CHECK_THROWS_AS(pair_bounds(-0.1, 0.5), ConstraintError);
  CHECK_THROWS_AS(pair_bounds(0.5, 1.1), ConstraintError);

  for (double yp : {0.0, 0.25, 0.6, 1.0}) {
    for (double yq : {0.0, 0.4, 0.9, 1.0}) {
      const Interval iv = pair_bounds(yp, yq);
      CHECK(std::abs(interval_witness(yp, yq, true).overlap() - iv.hi) <=
            1e-15);
      CHECK(std::abs(interval_witness(yp, yq, false).overlap() - iv.lo) <=
            1e-15);
    }
  }
}

TEST_CASE("local slice values at the symmetric point") {
  const SliceQuery lower =
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::loc, Side::lower);
  const SliceResult rl = slice_local(lower);
  CHECK(std::abs(rl.value - 0.5) <= 1e-12);
  check_result_consistency(lower, rl);

  const SliceQuery upper =
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::loc, Side::upper);
  const SliceResult ru = slice_local(upper);
  CHECK(std::abs(ru.value - 1.5) <= 1e-12);
  check_result_consistency(upper, ru);
}

TEST_CASE("saturated diagonal forces every pair to one") {
  for (Side side : {Side::upper, Side::lower}) {
    const SliceQuery q = make_query(1, 1, 1, 2, -1, .5, CorrClass::loc, side);
    const SliceResult r = slice_local(q);
    CHECK(std::abs(r.value - (2.0 - 1.0 + 0.5)) <= 1e-12);
  }
}

TEST_CASE("local slices reject unsupported sizes") {
  SliceQuery q;
  q.n = 5;
  q.y = Eigen::VectorXd::Constant(5, 0.5);
  q.x = Eigen::VectorXd::Ones(10);
  CHECK_THROWS_AS(slice_local(q), ConstraintError);

  SliceQuery bad = make_query(.5, .5, 1.5, 1, 1, 1, CorrClass::loc, Side::upper);
  CHECK_THROWS_AS(slice_local(bad), ConstraintError);
}

TEST_CASE("quantum slice achieves 3/8 below the local 1/2") {
  const SliceQuery q =
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::q, Side::lower);
  const SliceResult r = slice_q3(q);
  CHECK(std::abs(r.value - 0.375) <= 1e-12);
  CHECK_FALSE(r.degenerate_path);
  // The optimum sits on the 2x2 trace atom alone.
  REQUIRE(r.weights.size() == 9);
  CHECK(std::abs(r.weights[8] - 1.0) <= 1e-12);
  check_result_consistency(q, r);

  const SliceQuery up =
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::q, Side::upper);
  const SliceResult ru = slice_q3(up);
  CHECK(std::abs(ru.value - 1.5) <= 1e-12);
  check_result_consistency(up, ru);
}

TEST_CASE("degenerate directions agree with the local LP and closed form") {
  const SliceQuery q =
      make_query(.5, .6, .7, 0, 1, -1, CorrClass::q, Side::upper);
  const SliceResult rq = slice_q3(q);
  const SliceResult rl = slice_local(q);
  CHECK(rq.degenerate_path);
  CHECK(rq.value == rl.value);  // the degenerate path delegates verbatim
  CHECK(std::abs(rq.value - 0.2) <= 1e-12);
  CHECK(std::abs(degenerate_slice_value(q) - rq.value) <= 1e-12);

  const SliceQuery nondeg =
      make_query(.5, .6, .7, 1, 1, 1, CorrClass::q, Side::upper);
  CHECK_THROWS_AS(degenerate_slice_value(nondeg), ConstraintError);
}

TEST_CASE("quantum slices are only exact at three questions") {
  SliceQuery q;
  q.n = 4;
  q.y = Eigen::VectorXd::Constant(4, 0.5);
  q.x = Eigen::VectorXd::Ones(6);
  CHECK_THROWS_AS(slice_q3(q), ConstraintError);
}

TEST_CASE("lp_solve basics") {
  std::vector<LpAtom> atoms(1);
  atoms[0].diag = Eigen::Vector3d(0.5, 0.25, 1.0);
  atoms[0].offdiag = Eigen::Vector3d(0.1, 0.2, 0.3);
  const LpSolution one = lp_solve(atoms, Eigen::Vector3d(1, 1, 1),
                                  Eigen::Vector3d(0.5, 0.25, 1.0), Side::upper);
  REQUIRE(one.feasible);
  CHECK(one.lambda[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.value == doctest::Approx(0.6).epsilon(1e-12));

  // Eight deterministic atoms, lower side, symmetric diagonal: value 1/2.
  std::vector<LpAtom> cube;
  for (int v = 0; v < 8; ++v) {
    LpAtom atom;
    const double a0 = 1.0 - ((v >> 2) & 1), a1 = 1.0 - ((v >> 1) & 1),
                 a2 = 1.0 - (v & 1);
    atom.diag = Eigen::Vector3d(a0, a1, a2);
    atom.offdiag = Eigen::Vector3d(a0 * a1, a0 * a2, a1 * a2);
    cube.push_back(std::move(atom));
  }
  const LpSolution low = lp_solve(cube, Eigen::Vector3d(1, 1, 1),
                                  Eigen::Vector3d(0.5, 0.5, 0.5), Side::lower);
  REQUIRE(low.feasible);
  CHECK(std::abs(low.value - 0.5) <= 1e-12);

  const LpSolution out = lp_solve(cube, Eigen::Vector3d(1, 1, 1),
                                  Eigen::Vector3d(0.5, 0.5, 1.5), Side::upper);
  CHECK_FALSE(out.feasible);
  CHECK(out.supports_checked > 0);
}

TEST_CASE("lower values equal negated upper values of the flipped direction") {
  Rng rng(55);
  for (int rep = 0; rep < 25; ++rep) {
    const double y0 = rng.uniform(), y1 = rng.uniform(), y2 = rng.uniform();
    const auto draw = [&] {
      const double v = -2.0 + 4.0 * rng.uniform();
      return v == 0.0 ? 0.5 : v;
    };
    const double a = draw(), b = draw(), c = draw();
    for (CorrClass cls : {CorrClass::loc, CorrClass::q}) {
      const SliceQuery lo = make_query(y0, y1, y2, a, b, c, cls, Side::lower);
      SliceQuery up = lo;
      up.x = -lo.x;
      up.side = Side::upper;
      const auto solve = [&](const SliceQuery& q) {
        return cls == CorrClass::q ? slice_q3(q) : slice_local(q);
      };
      CHECK(solve(lo).value == -solve(up).value);
    }
  }
}

TEST_CASE("local values never beat quantum values") {
  Rng rng(56);
  for (int rep = 0; rep < 25; ++rep) {
    const double y0 = rng.uniform(), y1 = rng.uniform(), y2 = rng.uniform();
    const auto draw = [&] {
      const double v = -2.0 + 4.0 * rng.uniform();
      return std::abs(v) < 0.05 ? 0.5 : v;
    };
    const SliceQuery base =
        make_query(y0, y1, y2, draw(), draw(), draw(), CorrClass::q, Side::upper);
    const double uq = slice_q3(base).value;
    const double uloc = slice_local(base).value;
    CHECK(uloc <= uq + 1e-10);

    SliceQuery lo = base;
    lo.side = Side::lower;
    const double lq = slice_q3(lo).value;
    const double lloc = slice_local(lo).value;
    CHECK(lq <= lloc + 1e-10);
  }
}

TEST_CASE("realizing models re-synthesize random slice optima") {
  Rng rng(57);
  for (int rep = 0; rep < 15; ++rep) {
    const SliceQuery q = make_query(
        rng.uniform(), rng.uniform(), rng.uniform(), -1.5 + 3.0 * rng.uniform(),
        -1.5 + 3.0 * rng.uniform(), 0.3 + rng.uniform(), CorrClass::q,
        rep % 2 ? Side::upper : Side::lower);
    if (q.x(0) == 0.0 || q.x(1) == 0.0) continue;
    check_result_consistency(q, slice_q3(q));
  }
}

TEST_CASE("the graph functional at the symmetric half point") {
  // With constant diagonal t and unit direction, 2·l_q + 3t is the
  // two-party graph value; at t = 1/2 it equals 9/4.
  const SliceQuery q =
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::q, Side::lower);
  const double f = 2.0 * slice_q3(q).value + 3.0 * 0.5;
  CHECK(std::abs(f - 2.25) <= 1e-12);
}

TEST_CASE("dominance report over sampled models") {
  auto samples = sample_dq(3, 4, 4000, 1234);
  // Inject the 2x2-block optimum so the 3/8 landmark is attained exactly.
  const Universal3Rep rep = build_rep(1.0, 1.0);
  std::vector<double> pure(9, 0.0);
  pure[8] = 1.0;
  samples.push_back(model_sample(realizing_model(rep, pure)));

  std::vector<SliceQuery> queries;
  queries.push_back(
      make_query(.5, .5, .5, -1, -1, -1, CorrClass::q, Side::upper));
  queries.push_back(
      make_query(.5, .5, .5, 1, 1, 1, CorrClass::q, Side::lower));
  queries.push_back(
      make_query(.5, .6, .7, 0, 1, -1, CorrClass::q, Side::upper));
  const auto entries = dominance_check(samples, queries, 0.05);
  REQUIRE(entries.size() == queries.size());
  CHECK(entries[0].bound == doctest::Approx(-0.375));
  CHECK_FALSE(entries[0].no_data);
  CHECK(entries[0].max_excess <= 1e-9);
  CHECK(entries[1].max_excess <= 1e-9);
  CHECK(entries[2].max_excess <= 1e-9);

  // An empty neighborhood is reported as missing data, not as a pass:
  // no sample hits an irrational diagonal within 1e-9.
  const std::vector<SliceQuery> unreachable = {make_query(
      1 / std::sqrt(2.0), 1 / std::sqrt(3.0), 1 / std::sqrt(5.0), 1, 1, 1,
      CorrClass::q, Side::upper)};
  const auto missing = dominance_check(samples, unreachable, 1e-9);
  REQUIRE(missing.size() == 1);
  CHECK(missing[0].no_data);
  CHECK(missing[0].support == 0);
  CHECK(std::isnan(missing[0].max_excess));

  // The injected sample attains the bound: zero distance, zero slack.
  bool attained = false;
  for (const DqSample& s : samples) {
    if ((s.y - Eigen::Vector3d(.5, .5, .5)).lpNorm<Eigen::Infinity>() > 1e-12)
      continue;
    if (std::abs(s.w.sum() - 0.375) <= 5e-3) attained = true;
  }
  CHECK(attained);

  const auto serial = dominance_check(samples, queries, 0.05, Exec::serial);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(serial[i].support == entries[i].support);
    const bool both_nan =
        std::isnan(serial[i].max_excess) && std::isnan(entries[i].max_excess);
    CHECK((both_nan || serial[i].max_excess == entries[i].max_excess));
  }
}
