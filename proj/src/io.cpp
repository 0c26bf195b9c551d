#include "syncorr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace syncorr {

namespace {

double json_number(const Json& j, const char* what) {
  if (!j.is_number())
    throw ConstraintError("format", std::string(what) + " must be a number");
  return j.get<double>();
}

int json_int(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ConstraintError("format", std::string(what) + " must be an integer");
  return j.get<int>();
}

const Json& json_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConstraintError("format",
                          std::string("missing field \"") + key + "\"");
  return j.at(key);
}

Matrix complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw ConstraintError("format", "matrix must be a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ConstraintError("format", "ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      if (!e.is_array() || e.size() != 2)
        throw ConstraintError("format", "matrix entries must be [re, im]");
      m(r, c) = Complex(json_number(e[0], "re"), json_number(e[1], "im"));
    }
  }
  return m;
}

Json complex_matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json tensor_to_json(const CorrelationTensor& t) {
  Json px = Json::array();
  for (int x = 0; x < t.n; ++x) {
    Json py = Json::array();
    for (int y = 0; y < t.n; ++y) {
      Json pi = Json::array();
      for (int i = 0; i < t.m; ++i) {
        Json pj = Json::array();
        for (int j = 0; j < t.m; ++j) pj.push_back(t.at(x, y, i, j));
        pi.push_back(std::move(pj));
      }
      py.push_back(std::move(pi));
    }
    px.push_back(std::move(py));
  }
  return Json{{"n", t.n}, {"m", t.m}, {"p", std::move(px)}};
}

CorrelationTensor tensor_from_json(const Json& j) {
  const int n = json_int(json_field(j, "n"), "n");
  const int m = json_int(json_field(j, "m"), "m");
  if (n < 1 || m < 1)
    throw ConstraintError("format", "n and m must be positive");
  const Json& p = json_field(j, "p");
  CorrelationTensor t(n, m);
  if (!p.is_array() || static_cast<int>(p.size()) != n)
    throw ConstraintError("format", "p must have n question rows");
  for (int x = 0; x < n; ++x) {
    if (!p[x].is_array() || static_cast<int>(p[x].size()) != n)
      throw ConstraintError("format", "p[x] must have n question columns");
    for (int y = 0; y < n; ++y) {
      if (!p[x][y].is_array() || static_cast<int>(p[x][y].size()) != m)
        throw ConstraintError("format", "p[x][y] must be an m-by-m block");
      for (int i = 0; i < m; ++i) {
        if (!p[x][y][i].is_array() ||
            static_cast<int>(p[x][y][i].size()) != m)
          throw ConstraintError("format", "p[x][y] must be an m-by-m block");
        for (int jj = 0; jj < m; ++jj)
          t.at(x, y, i, jj) = json_number(p[x][y][i][jj], "p entry");
      }
    }
  }
  return t;
}

Json matrix_to_json(const CorrelationMatrix& mat) {
  Json rows = Json::array();
  for (int x = 0; x < mat.n; ++x) {
    Json row = Json::array();
    for (int y = 0; y < mat.n; ++y) row.push_back(mat.w(x, y));
    rows.push_back(std::move(row));
  }
  return Json{{"n", mat.n}, {"w", std::move(rows)}};
}

CorrelationMatrix matrix_from_json(const Json& j) {
  const int n = json_int(json_field(j, "n"), "n");
  if (n < 1) throw ConstraintError("format", "n must be positive");
  const Json& w = json_field(j, "w");
  if (!w.is_array() || static_cast<int>(w.size()) != n)
    throw ConstraintError("format", "w must have n rows");
  CorrelationMatrix mat;
  mat.n = n;
  mat.w.resize(n, n);
  for (int x = 0; x < n; ++x) {
    if (!w[x].is_array() || static_cast<int>(w[x].size()) != n)
      throw ConstraintError("format", "w rows must have n entries");
    for (int y = 0; y < n; ++y)
      mat.w(x, y) = json_number(w[x][y], "w entry");
  }
  return mat;
}

Json model_to_json(const TracialModel& model) {
  Json pvms = Json::array();
  for (const auto& pvm : model.pvms) {
    Json outcomes = Json::array();
    for (const BlockOperator& op : pvm) {
      Json blocks = Json::array();
      for (const Matrix& blk : op.blocks)
        blocks.push_back(complex_matrix_to_json(blk));
      outcomes.push_back(std::move(blocks));
    }
    pvms.push_back(std::move(outcomes));
  }
  return Json{{"blocks", model.algebra.dims},
              {"weights", model.trace.weights},
              {"pvms", std::move(pvms)}};
}

TracialModel model_from_json(const Json& j) {
  TracialModel model;
  const Json& blocks = json_field(j, "blocks");
  const Json& weights = json_field(j, "weights");
  const Json& pvms = json_field(j, "pvms");
  if (!blocks.is_array() || !weights.is_array() || !pvms.is_array())
    throw ConstraintError("format", "blocks, weights, pvms must be arrays");
  for (const Json& d : blocks)
    model.algebra.dims.push_back(json_int(d, "block dimension"));
  for (const Json& w : weights)
    model.trace.weights.push_back(json_number(w, "weight"));

  for (const Json& q : pvms) {
    if (!q.is_array())
      throw ConstraintError("format", "pvms[x] must be an outcome list");
    std::vector<BlockOperator> pvm;
    for (const Json& outcome : q) {
      if (!outcome.is_array() ||
          outcome.size() != model.algebra.dims.size())
        throw ConstraintError("format", "pvms[x][i] must list one matrix per block");
      BlockOperator op;
      op.hermitian = true;
      op.projection = true;
      for (std::size_t k = 0; k < outcome.size(); ++k) {
        Matrix blk = complex_matrix_from_json(outcome[k]);
        if (blk.rows() != model.algebra.dims[k] ||
            blk.cols() != model.algebra.dims[k])
          throw ConstraintError("format", "block matrix size mismatch");
        op.blocks.push_back(std::move(blk));
      }
      pvm.push_back(std::move(op));
    }
    model.pvms.push_back(std::move(pvm));
  }
  return model;
}

Json rep_to_json(const Universal3Rep& rep) {
  Json atoms = Json::array();
  for (const TraceAtom& atom : rep.atoms) {
    Json a{{"diag", atom.diag}, {"offdiag", atom.offdiag}};
    if (atom.is_m2)
      a["kind"] = "M2";
    else
      a["kind"] = atom.bits;
    atoms.push_back(std::move(a));
  }
  Json out{{"a", rep.a},
           {"b", rep.b},
           {"t", rep.t},
           {"has_m2", rep.has_m2},
           {"atoms", std::move(atoms)}};
  if (rep.has_m2) {
    out["z"] = rep.z;
    out["disc"] = rep.disc;
    out["z_other"] = rep.z_other;
    out["winner_residual"] = rep.winner_residual;
    out["loser_residual"] = rep.loser_residual;
    out["branches_coincide"] = rep.branches_coincide;
  }
  return out;
}

std::vector<SliceQuery> queries_from_json(const Json& j) {
  if (!j.is_array())
    throw ConstraintError("format", "query file must be a JSON list");
  std::vector<SliceQuery> out;
  for (const Json& q : j) {
    SliceQuery query;
    const Json& y = json_field(q, "y");
    if (!y.is_array() || y.empty())
      throw ConstraintError("format", "query y must be a non-empty list");
    query.n = static_cast<int>(y.size());
    query.y.resize(query.n);
    for (int i = 0; i < query.n; ++i)
      query.y(i) = json_number(y[i], "y entry");

    const Json& x = json_field(q, "x");
    query.x.setZero(pair_count(query.n));
    if (!x.is_object())
      throw ConstraintError("format", "query x must be an object of pairs");
    for (auto it = x.begin(); it != x.end(); ++it) {
      const std::string& key = it.key();
      if (key.size() != 2 || !isdigit(key[0]) || !isdigit(key[1]))
        throw ConstraintError("format", "pair keys look like \"01\"");
      const int i = key[0] - '0';
      const int jj = key[1] - '0';
      if (i >= jj || jj >= query.n)
        throw ConstraintError("format", "pair key out of range");
      query.x(pair_index(i, jj, query.n)) = json_number(*it, "x entry");
    }

    const std::string cls = json_field(q, "cls").get<std::string>();
    if (cls == "q")
      query.cls = CorrClass::q;
    else if (cls == "loc")
      query.cls = CorrClass::loc;
    else
      throw ConstraintError("format", "cls must be \"q\" or \"loc\"");

    const std::string side = json_field(q, "side").get<std::string>();
    if (side == "upper")
      query.side = Side::upper;
    else if (side == "lower")
      query.side = Side::lower;
    else
      throw ConstraintError("format", "side must be \"upper\" or \"lower\"");
    out.push_back(std::move(query));
  }
  return out;
}

Json query_to_json(const SliceQuery& q) {
  Json y = Json::array();
  for (int i = 0; i < q.y.size(); ++i) y.push_back(q.y(i));
  Json x = Json::object();
  for (int i = 0; i < q.n; ++i)
    for (int j = i + 1; j < q.n; ++j) {
      std::string key{char('0' + i), char('0' + j)};
      x[key] = q.x(pair_index(i, j, q.n));
    }
  return Json{{"y", std::move(y)},
              {"x", std::move(x)},
              {"cls", q.cls == CorrClass::q ? "q" : "loc"},
              {"side", q.side == Side::upper ? "upper" : "lower"}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConstraintError("io", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConstraintError("format", path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConstraintError("io", "cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_samples_csv(const std::string& path,
                       const std::vector<DqSample>& samples, int n) {
  std::ofstream out(path);
  if (!out) throw ConstraintError("io", "cannot write " + path);
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "y" << i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out << ",w" << i << j;
  out << "\n";
  for (const DqSample& s : samples) {
    for (int i = 0; i < n; ++i)
      out << (i ? "," : "") << format_double(s.y(i));
    for (int e = 0; e < s.w.size(); ++e) out << "," << format_double(s.w(e));
    out << "\n";
  }
}

std::vector<DqSample> read_samples_csv(const std::string& path, int* n_out) {
  std::ifstream in(path);
  if (!in) throw ConstraintError("io", "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConstraintError("format", path + ": missing header");
  int cols = 1;
  for (char c : line)
    if (c == ',') ++cols;
  // cols = n + n(n−1)/2.
  int n = 0;
  while (n + pair_count(n) < cols) ++n;
  if (n + pair_count(n) != cols)
    throw ConstraintError("format", path + ": column count fits no n");
  if (n_out) *n_out = n;

  std::vector<DqSample> samples;
  const int pc = pair_count(n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    DqSample s;
    s.y.resize(n);
    s.w.resize(pc);
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    for (int c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto res = std::from_chars(ptr, end, v);
      if (res.ec != std::errc{})
        throw ConstraintError("format", path + ": bad number");
      ptr = res.ptr;
      if (c + 1 < cols) {
        if (ptr >= end || *ptr != ',')
          throw ConstraintError("format", path + ": expected comma");
        ++ptr;
      }
      if (c < n)
        s.y(c) = v;
      else
        s.w(c - n) = v;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_dominance_csv(const std::string& path,
                         const std::vector<DominanceEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw ConstraintError("io", "cannot write " + path);
  out << "query-id,value,degenerate_path,max_residual\n";
  for (const DominanceEntry& e : entries) {
    out << e.query << "," << format_double(e.bound) << ","
        << (e.degenerate_path ? 1 : 0) << ",";
    if (e.no_data)
      out << "nan";
    else
      out << format_double(e.max_excess);
    out << "\n";
  }
}

}  // namespace syncorr
