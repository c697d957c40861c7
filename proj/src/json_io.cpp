#include "ncr/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ncr::io {

namespace {

// Adding 0.0 turns -0.0 into 0.0 so output does not depend on signed zeros.
Json scalar_to_json(Scalar s, Field f) {
  if (f == Field::Real) return s.real() + 0.0;
  return Json::array({s.real() + 0.0, s.imag() + 0.0});
}

Scalar scalar_from_json(const Json& j, Field f) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    if (f == Field::Real && j[1].get<double>() != 0.0) throw InputError("complex entry in a real matrix");
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError("matrix entry must be a number or a [re, im] pair");
}

const Json& field_of(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  return j.at(key);
}

int int_of(const Json& j, const char* key) {
  const Json& v = field_of(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<int>();
}

}  // namespace

Json to_json(const Mat& m, Field f) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(scalar_to_json(m(i, k), f));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vec& v, Field f) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i), f));
  return out;
}

Mat matrix_from_json(const Json& j, Field f) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) throw InputError("matrix rows must be arrays");
    cols = static_cast<Index>(j[0].size());
  }
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) throw InputError("ragged matrix");
    for (Index k = 0; k < cols; ++k) m(i, k) = scalar_from_json(row[static_cast<std::size_t>(k)], f);
  }
  return m;
}

Vec vector_from_json(const Json& j, Field f) {
  if (!j.is_array()) throw InputError("vector must be an array");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = scalar_from_json(j[i], f);
  return v;
}

Json to_json(const LinearPencil& l) {
  Json out;
  out["field"] = to_string(l.field);
  out["g"] = l.g;
  out["d"] = l.d;
  out["e"] = l.e;
  Json coeffs = Json::array();
  for (const auto& a : l.coeffs) coeffs.push_back(to_json(a, l.field));
  out["coeffs"] = std::move(coeffs);
  return out;
}

LinearPencil pencil_from_json(const Json& j) {
  LinearPencil l;
  const Json& fj = field_of(j, "field");
  if (!fj.is_string()) throw InputError("'field' must be \"R\" or \"C\"");
  l.field = field_from_string(fj.get<std::string>());
  l.g = int_of(j, "g");
  l.d = int_of(j, "d");
  l.e = int_of(j, "e");
  const Json& cj = field_of(j, "coeffs");
  if (!cj.is_array()) throw InputError("'coeffs' must be an array");
  for (const auto& m : cj) {
    Mat a = matrix_from_json(m, l.field);
    // Allow [] for 0-sized matrices.
    if (a.rows() == 0) a = Mat::Zero(l.d, l.e);
    l.coeffs.push_back(std::move(a));
  }
  l.validate();
  return l;
}

Json to_json(const MatrixPoint& x) {
  Json out;
  out["field"] = to_string(x.field);
  out["g"] = x.g();
  out["n"] = x.n;
  Json mats = Json::array();
  for (const auto& m : x.mats) mats.push_back(to_json(m, x.field));
  out["X"] = std::move(mats);
  return out;
}

MatrixPoint point_from_json(const Json& j) {
  MatrixPoint x;
  const Json& fj = field_of(j, "field");
  if (!fj.is_string()) throw InputError("'field' must be \"R\" or \"C\"");
  x.field = field_from_string(fj.get<std::string>());
  const int g = int_of(j, "g");
  x.n = int_of(j, "n");
  const Json& mj = field_of(j, "X");
  if (!mj.is_array() || static_cast<int>(mj.size()) != g) throw InputError("'X' must hold g matrices");
  for (const auto& m : mj) x.mats.push_back(matrix_from_json(m, x.field));
  x.selfadjoint = false;
  x.validate();
  bool sa = true;
  for (const auto& m : x.mats) sa = sa && (m - m.adjoint()).norm() <= 1e-12;
  x.selfadjoint = sa;
  return x;
}

Json to_json(const Realization& r) {
  Json out;
  out["c"] = to_json(r.c, r.field);
  out["b"] = to_json(r.b, r.field);
  out["pencil"] = to_json(r.pencil);
  out["center"] = r.center;
  return out;
}

Realization realization_from_json(const Json& j) {
  Realization r;
  r.pencil = pencil_from_json(field_of(j, "pencil"));
  r.field = r.pencil.field;
  r.c = vector_from_json(field_of(j, "c"), r.field);
  r.b = vector_from_json(field_of(j, "b"), r.field);
  const Json& cj = field_of(j, "center");
  if (!cj.is_array()) throw InputError("'center' must be an array");
  for (const auto& v : cj) {
    if (!v.is_number()) throw InputError("center entries must be numbers");
    r.center.push_back(v.get<double>());
  }
  if (r.pencil.d != r.pencil.e || r.c.size() != r.pencil.d || r.b.size() != r.pencil.d ||
      static_cast<int>(r.center.size()) != r.pencil.g)
    throw InputError("realization sizes are inconsistent");
  return r;
}

Json to_json(const EllipticityCertificate& c, Field f) {
  Json out;
  out["verdict"] = to_string(c.verdict);
  out["transposed"] = c.transposed;
  Json chain = Json::array();
  for (const auto& s : c.chain) {
    Json step;
    step["D"] = to_json(s.D, f);
    std::vector<double> eigs(s.eigs.data(), s.eigs.data() + s.eigs.size());
    step["eigs"] = eigs;
    step["V"] = to_json(s.V, f);
    step["t_star"] = s.t_star;
    step["homogeneous_dim"] = s.homogeneous_dim;
    chain.push_back(std::move(step));
  }
  out["chain"] = std::move(chain);
  out["epsilon"] = c.epsilon ? Json(*c.epsilon) : Json(nullptr);
  out["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
  if (!c.exposing.empty()) {
    Json zs = Json::array();
    for (const auto& z : c.exposing) zs.push_back(to_json(z, f));
    out["exposing"] = std::move(zs);
  }
  if (!c.message.empty()) out["message"] = c.message;
  return out;
}

Json to_json(const EquivalencePlan& p) {
  Json out;
  out["kappa"] = p.kappa;
  out["tau"] = p.t;
  out["dim_V"] = p.dim_v;
  out["dim_V_truncated"] = p.dim_truncated;
  out["size_bound"] = p.size_bound;
  out["sizes"] = p.sizes;
  out["samples_per_size"] = p.samples_per_size;
  return out;
}

Json to_json(const SohsCertificate& c) {
  Json out;
  out["k"] = c.k;
  Json basis = Json::array();
  for (const auto& e : c.basis.elements) basis.push_back(format(e));
  out["basis"] = std::move(basis);
  out["basis_levels"] = c.basis.levels;
  out["basis_truncated"] = c.basis.truncated;
  out["G"] = to_json(c.G, c.field);
  Json squares = Json::array();
  for (const auto& s : c.squares) squares.push_back(format(s));
  out["squares"] = std::move(squares);
  out["plan"] = to_json(c.plan);
  Json res;
  res["max"] = c.residual.max;
  res["mean"] = c.residual.mean;
  res["sizes"] = c.residual.sizes;
  res["points"] = c.residual.points;
  out["residual"] = std::move(res);
  return out;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

}  // namespace ncr::io
