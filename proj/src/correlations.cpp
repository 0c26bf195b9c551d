#include "syncorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace syncorr {

namespace {

void check_shape(const CorrelationTensor& t) {
  if (t.n < 1 || t.m < 1)
    throw ConstraintError("shape", "tensor dimensions must be positive");
  const std::size_t want =
      static_cast<std::size_t>(t.n) * t.n * t.m * t.m;
  if (t.p.size() != want) {
    std::ostringstream os;
    os << "tensor storage has " << t.p.size() << " entries, expected "
       << want << " for n=" << t.n << " m=" << t.m;
    throw ConstraintError("shape", os.str());
  }
}

// Largest spread of the would-be marginals over the other party's question.
double nonsignaling_residual(const CorrelationTensor& t) {
  double res = 0.0;
  for (int x = 0; x < t.n; ++x) {
    for (int i = 0; i < t.m; ++i) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int y = 0; y < t.n; ++y) {
        double s = 0.0;
        for (int j = 0; j < t.m; ++j) s += t.at(x, y, i, j);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      res = std::max(res, hi - lo);
    }
  }
  for (int y = 0; y < t.n; ++y) {
    for (int j = 0; j < t.m; ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int x = 0; x < t.n; ++x) {
        double s = 0.0;
        for (int i = 0; i < t.m; ++i) s += t.at(x, y, i, j);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      res = std::max(res, hi - lo);
    }
  }
  return res;
}

}  // namespace

ClassReport validate(const CorrelationTensor& t, double tol) {
  check_shape(t);
  ClassReport r;

  for (double v : t.p)
    r.nonnegativity_residual = std::max(r.nonnegativity_residual, -v);
  for (int x = 0; x < t.n; ++x) {
    for (int y = 0; y < t.n; ++y) {
      double s = 0.0;
      for (int i = 0; i < t.m; ++i)
        for (int j = 0; j < t.m; ++j) s += t.at(x, y, i, j);
      r.normalization_residual =
          std::max(r.normalization_residual, std::abs(s - 1.0));
    }
  }
  r.nonsignaling_residual = nonsignaling_residual(t);
  for (int x = 0; x < t.n; ++x)
    for (int i = 0; i < t.m; ++i)
      for (int j = 0; j < t.m; ++j)
        if (i != j)
          r.synchronicity_residual =
              std::max(r.synchronicity_residual, std::abs(t.at(x, x, i, j)));

  r.is_correlation =
      r.nonnegativity_residual <= tol && r.normalization_residual <= tol;
  r.is_nonsignaling = r.nonsignaling_residual <= tol;
  r.is_synchronous = r.synchronicity_residual <= tol;
  r.max_violation =
      std::max({r.nonnegativity_residual, r.normalization_residual,
                r.nonsignaling_residual, r.synchronicity_residual});
  return r;
}

Marginals marginals(const CorrelationTensor& t, double tol) {
  check_shape(t);
  Marginals mg;
  mg.pA.setZero(t.n, t.m);
  mg.pB.setZero(t.n, t.m);
  mg.y_averaged = nonsignaling_residual(t) > tol;

  for (int x = 0; x < t.n; ++x) {
    for (int i = 0; i < t.m; ++i) {
      if (mg.y_averaged) {
        double s = 0.0;
        for (int y = 0; y < t.n; ++y)
          for (int j = 0; j < t.m; ++j) s += t.at(x, y, i, j);
        mg.pA(x, i) = s / t.n;
      } else {
        double s = 0.0;
        for (int j = 0; j < t.m; ++j) s += t.at(x, 0, i, j);
        mg.pA(x, i) = s;
      }
    }
  }
  for (int y = 0; y < t.n; ++y) {
    for (int j = 0; j < t.m; ++j) {
      if (mg.y_averaged) {
        double s = 0.0;
        for (int x = 0; x < t.n; ++x)
          for (int i = 0; i < t.m; ++i) s += t.at(x, y, i, j);
        mg.pB(y, j) = s / t.n;
      } else {
        double s = 0.0;
        for (int i = 0; i < t.m; ++i) s += t.at(0, y, i, j);
        mg.pB(y, j) = s;
      }
    }
  }
  return mg;
}

std::optional<Violation> matrix_infeasibility(const CorrelationMatrix& mat,
                                              double tol) {
  if (mat.n < 1 || mat.w.rows() != mat.n || mat.w.cols() != mat.n)
    return Violation{"shape", "matrix is not square of the declared size", 0.0};

  for (int x = 0; x < mat.n; ++x) {
    for (int y = 0; y < mat.n; ++y) {
      const double asym = std::abs(mat.w(x, y) - mat.w(y, x));
      if (asym > tol) {
        std::ostringstream os;
        os << "w(" << x << "," << y << ") != w(" << y << "," << x << ")";
        return Violation{"symmetry", os.str(), asym};
      }
    }
  }
  for (int x = 0; x < mat.n; ++x) {
    for (int y = 0; y < mat.n; ++y) {
      const double v = mat.w(x, y);
      const double out = std::max(-v, v - 1.0);
      if (out > tol) {
        std::ostringstream os;
        os << "w(" << x << "," << y << ") = " << v << " outside [0,1]";
        return Violation{"range", os.str(), out};
      }
    }
  }
  for (int x = 0; x < mat.n; ++x) {
    for (int y = 0; y < mat.n; ++y) {
      if (x == y) continue;
      const double upper =
          mat.w(x, y) - std::min(mat.w(x, x), mat.w(y, y));
      if (upper > tol) {
        std::ostringstream os;
        os << "w(" << x << "," << y << ") > min(w(" << x << "," << x
           << "), w(" << y << "," << y << "))";
        return Violation{"pair-upper", os.str(), upper};
      }
      const double lower =
          -(1.0 + mat.w(x, y) - mat.w(x, x) - mat.w(y, y));
      if (lower > tol) {
        std::ostringstream os;
        os << "1 + w(" << x << "," << y << ") - w(" << x << "," << x
           << ") - w(" << y << "," << y << ") < 0";
        return Violation{"pair-lower", os.str(), lower};
      }
    }
  }
  return std::nullopt;
}

RestrictResult restrict_to_matrix(const CorrelationTensor& t, double tol) {
  check_shape(t);
  if (t.m != 2)
    throw ConstraintError("outcomes",
                          "restriction to a matrix requires two outcomes");
  const ClassReport rep = validate(t, tol);
  if (!rep.is_correlation)
    throw ConstraintError("correlation",
                          "input is not a correlation within tolerance");
  if (!rep.is_synchronous)
    throw ConstraintError("synchronicity",
                          "input is not synchronous within tolerance");
  if (!rep.is_nonsignaling)
    throw ConstraintError("nonsignaling",
                          "input is not non-signaling within tolerance");

  RestrictResult out;
  out.matrix.n = t.n;
  out.matrix.w.resize(t.n, t.n);
  for (int x = 0; x < t.n; ++x) {
    for (int y = 0; y < t.n; ++y) {
      const double a = t.at(x, y, 0, 0);
      const double b = t.at(y, x, 0, 0);
      out.asymmetry = std::max(out.asymmetry, std::abs(a - b));
      out.matrix.w(x, y) = 0.5 * (a + b);
    }
  }
  if (out.asymmetry > tol)
    throw ConstraintError("symmetry",
                          "p(0,0|x,y) and p(0,0|y,x) disagree beyond tolerance");
  return out;
}

CorrelationTensor expand(const CorrelationMatrix& mat, double tol) {
  if (auto bad = matrix_infeasibility(mat, tol)) {
    throw ConstraintError(bad->constraint,
                          "infeasible correlation matrix: " + bad->detail);
  }
  CorrelationTensor t(mat.n, 2);
  for (int x = 0; x < mat.n; ++x) {
    for (int y = 0; y < mat.n; ++y) {
      if (x == y) {
        t.at(x, x, 0, 0) = mat.w(x, x);
        t.at(x, x, 1, 1) = 1.0 - mat.w(x, x);
      } else {
        t.at(x, y, 0, 0) = mat.w(x, y);
        t.at(x, y, 0, 1) = mat.w(x, x) - mat.w(x, y);
        t.at(x, y, 1, 0) = mat.w(y, y) - mat.w(x, y);
        t.at(x, y, 1, 1) = 1.0 + mat.w(x, y) - mat.w(x, x) - mat.w(y, y);
      }
    }
  }
  return t;
}

CorrelationTensor embed_outcomes(const CorrelationTensor& q, double tol) {
  check_shape(q);
  const ClassReport rep = validate(q, tol);
  if (!rep.is_correlation)
    throw ConstraintError("correlation",
                          "input is not a correlation within tolerance");
  if (!rep.is_nonsignaling)
    throw ConstraintError("nonsignaling",
                          "marginals undefined: input signals beyond tolerance");
  if (!rep.is_synchronous)
    throw ConstraintError("synchronicity",
                          "input is not synchronous within tolerance");

  const Marginals mg = marginals(q, tol);
  CorrelationTensor p(q.n * q.m, 2);
  for (int x = 0; x < q.n; ++x) {
    for (int i = 0; i < q.m; ++i) {
      const int u = x * q.m + i;
      for (int y = 0; y < q.n; ++y) {
        for (int j = 0; j < q.m; ++j) {
          const int v = y * q.m + j;
          const double q00 = q.at(x, y, i, j);
          p.at(u, v, 0, 0) = q00;
          p.at(u, v, 0, 1) = mg.pA(x, i) - q00;
          p.at(u, v, 1, 0) = mg.pB(y, j) - q00;
          p.at(u, v, 1, 1) = 1.0 - mg.pA(x, i) - mg.pB(y, j) + q00;
        }
      }
    }
  }
  return p;
}

ProjectionReport project_outcomes(const CorrelationTensor& p, int n, int m,
                                  double tol) {
  check_shape(p);
  if (n < 1 || m < 1 || p.m != 2 || p.n != n * m) {
    std::ostringstream os;
    os << "projection to (n=" << n << ", m=" << m
       << ") needs a two-outcome tensor over " << n * m << " questions, got ("
       << p.n << ", " << p.m << ")";
    throw ConstraintError("shape", os.str());
  }
  const ClassReport rep = validate(p, tol);
  if (!rep.is_correlation || !rep.is_synchronous)
    throw ConstraintError(
        "synchronicity",
        "input must be a synchronous two-outcome correlation within tolerance");

  CorrelationTensor q(n, m);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          q.at(x, y, i, j) = p.at(x * m + i, y * m + j, 0, 0);

  const ClassReport qr = validate(q, tol);
  ProjectionReport out;
  if (qr.all()) {
    out.in_class = true;
    out.tensor = std::move(q);
    out.residual = qr.max_violation;
    return out;
  }
  out.in_class = false;
  if (!qr.is_correlation) {
    if (qr.normalization_residual >= qr.nonnegativity_residual) {
      out.violated = "normalization";
      out.residual = qr.normalization_residual;
    } else {
      out.violated = "nonnegativity";
      out.residual = qr.nonnegativity_residual;
    }
  } else if (!qr.is_nonsignaling) {
    out.violated = "nonsignaling";
    out.residual = qr.nonsignaling_residual;
  } else {
    out.violated = "synchronicity";
    out.residual = qr.synchronicity_residual;
  }
  return out;
}

}  // namespace syncorr
