#include "relext/instance.hpp"

#include <algorithm>
#include <cmath>

#include "relext/random.hpp"
#include "relext/subspace.hpp"

namespace relext {

namespace ss = subspace;

Materialized materialize(const Instance& inst) {
  const Index n = inst.n;
  if (n < 1) throw InputError("n must be positive");
  if (!(inst.tol > 0.0) || !std::isfinite(inst.tol)) throw InputError("tol must be positive");
  if (inst.seed_span.rows() != 2 * n) throw InputError("seed_relation must have 2n rows");
  const LinearRelation A = LinearRelation::from_span(inst.seed_span, n, n, inst.tol);
  if (classify_symmetry(A) == Symmetry::not_symmetric)
    throw InputError("seed_relation is not symmetric");
  const SymmetricSeed seed = make_seed(A);

  Materialized m;
  if (inst.kind == TripletKind::von_neumann)
    m.triplet = von_neumann_triplet(seed, inst.V);
  else
    m.triplet = explicit_triplet(seed, inst.gamma0, inst.gamma1);
  if (inst.tau.dim != m.triplet.boundary_dim)
    throw InputError("tau acts on C^" + std::to_string(inst.tau.dim) + " but the boundary space is C^" +
                     std::to_string(m.triplet.boundary_dim));
  m.tau = RationalNevanlinna(inst.tau, inst.tol);
  return m;
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Index cols_if_empty) {
  if (!j.is_array()) throw InputError("matrix must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  if (rows == 0) return Matrix(0, cols_if_empty);
  if (!j[0].is_array()) throw InputError("matrix rows must be arrays");
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw InputError("matrix rows have different lengths");
    for (Index c = 0; c < cols; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw InputError("matrix entries must be [re, im] pairs");
      m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

Json to_json(const Instance& inst) {
  Json j;
  j["n"] = inst.n;
  j["tol"] = inst.tol;
  j["seed_relation"] = to_json(inst.seed_span);
  Json t;
  if (inst.kind == TripletKind::von_neumann) {
    t["kind"] = "von_neumann";
    t["V"] = to_json(inst.V);
  } else {
    t["kind"] = "explicit";
    t["gamma0"] = to_json(inst.gamma0);
    t["gamma1"] = to_json(inst.gamma1);
  }
  j["triplet"] = t;
  Json tau;
  tau["d"] = inst.tau.dim;
  tau["mul_basis"] = to_json(inst.tau.mul_basis);
  tau["A"] = to_json(inst.tau.A);
  tau["B"] = to_json(inst.tau.B);
  Json poles = Json::array();
  for (const Pole& p : inst.tau.poles) poles.push_back({{"alpha", p.alpha}, {"A_j", to_json(p.coef)}});
  tau["poles"] = poles;
  j["tau"] = tau;
  return j;
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw InputError(std::string("field '") + key + "' must be a number");
  return v.get<T>();
}

}  // namespace

Instance instance_from_json(const Json& j) {
  Instance inst;
  inst.n = number<Index>(j, "n");
  if (inst.n < 1) throw InputError("n must be positive");
  if (j.contains("tol")) inst.tol = number<double>(j, "tol");
  inst.seed_span = matrix_from_json(field(j, "seed_relation"));
  if (inst.seed_span.rows() != 2 * inst.n) throw InputError("seed_relation must have 2n rows");

  const Json& t = field(j, "triplet");
  const Json& kind = field(t, "kind");
  if (kind == "von_neumann") {
    inst.kind = TripletKind::von_neumann;
    inst.V = matrix_from_json(field(t, "V"));
  } else if (kind == "explicit") {
    inst.kind = TripletKind::explicit_maps;
    inst.gamma0 = matrix_from_json(field(t, "gamma0"), 2 * inst.n);
    inst.gamma1 = matrix_from_json(field(t, "gamma1"), 2 * inst.n);
  } else {
    throw InputError("unknown triplet kind");
  }

  const Json& tau = field(j, "tau");
  const auto d = number<Index>(tau, "d");
  if (d < 0) throw InputError("tau.d must be nonnegative");
  inst.tau.dim = d;
  inst.tau.mul_basis = matrix_from_json(field(tau, "mul_basis"));
  if (inst.tau.mul_basis.rows() == 0) inst.tau.mul_basis = Matrix(d, 0);
  inst.tau.A = matrix_from_json(field(tau, "A"), d);
  inst.tau.B = matrix_from_json(field(tau, "B"), d);
  const Json& poles = field(tau, "poles");
  if (!poles.is_array()) throw InputError("tau.poles must be an array");
  for (const Json& p : poles) inst.tau.poles.push_back({number<double>(p, "alpha"), matrix_from_json(field(p, "A_j"), d)});
  return inst;
}

Json model_dump(const Matrix& a_tilde_frame, Index dim_H, Index dim_Hr) {
  return {{"dim_H", dim_H}, {"dim_Hr", dim_Hr}, {"A_tilde_frame", to_json(a_tilde_frame)}};
}

const char* to_string(Profile p) {
  switch (p) {
    case Profile::general: return "general";
    case Profile::positive_B: return "positive_B";
    case Profile::no_B_no_K: return "no_B_no_K";
    case Profile::trivial_boundary: return "trivial_boundary";
    case Profile::with_K: return "with_K";
  }
  return "?";
}

namespace {

std::vector<double> distinct_alphas(Rng& rng, Index count) {
  std::vector<double> out;
  while (static_cast<Index>(out.size()) < count) {
    const double a = rng.uniform(-3.0, 3.0);
    if (std::all_of(out.begin(), out.end(), [a](double b) { return std::abs(a - b) > 0.3; }))
      out.push_back(a);
  }
  return out;
}

}  // namespace

Instance generate_instance(const GenBounds& bounds, std::uint64_t seed, Profile profile) {
  Rng rng(seed);
  const Index max_b = std::max<Index>(bounds.max_boundary, 0);
  const bool needs_boundary = profile == Profile::positive_B || profile == Profile::no_B_no_K ||
                              profile == Profile::with_K;
  if (profile == Profile::trivial_boundary || (needs_boundary && max_b == 0))
    profile = Profile::trivial_boundary;

  Instance inst;
  const Index n = rng.integer(1, std::max<Index>(bounds.max_dim, 1));
  inst.n = n;
  Index d = 0;
  if (profile == Profile::general)
    d = rng.integer(0, std::min(max_b, n));
  else if (profile != Profile::trivial_boundary)
    d = rng.integer(1, std::min(max_b, n));

  // A = {{f, H f + w} : f in D, w in W}, D ⊥ W, dim D + dim W = n - d.
  const Index rest = n - d;
  const Index w = rng.integer(0, rest);
  const Index k = rest - w;
  const Matrix U = rng.unitary(n);
  const Matrix H = rng.hermitian(n);
  Matrix span = Matrix::Zero(2 * n, rest);
  span.topLeftCorner(n, k) = U.leftCols(k);
  span.bottomLeftCorner(n, k) = H * U.leftCols(k);
  span.bottomRightCorner(n, w) = U.middleCols(k, w);
  if (rest > 0) span = span * rng.gaussian(rest, rest);
  inst.seed_span = span;

  inst.V = rng.unitary(d);
  if (rng.coin(1.0 / 3.0) && d > 0) {
    const LinearRelation A = LinearRelation::from_span(span, n, n, inst.tol);
    const BoundaryTriplet vn = von_neumann_triplet(make_seed(A), inst.V);
    const Matrix g0 = vn.gamma0 * vn.a_star_basis.adjoint();
    const Matrix g1 = vn.gamma1 * vn.a_star_basis.adjoint();
    RealVector s(d);
    for (Index i = 0; i < d; ++i) s(i) = rng.uniform(0.5, 2.0);
    const Matrix X = rng.unitary(d) * s.asDiagonal() * rng.unitary(d);
    const Matrix shift = 0.5 * rng.hermitian(d);
    inst.kind = TripletKind::explicit_maps;
    inst.gamma0 = X * g0;
    inst.gamma1 = X.adjoint().inverse() * (g1 + shift * g0);
    inst.V = Matrix(0, 0);
  }

  TauCoefficients& tau = inst.tau;
  tau.dim = d;
  Index kdim = 0;
  switch (profile) {
    case Profile::general: kdim = rng.coin(0.3) ? rng.integer(0, d) : 0; break;
    case Profile::positive_B: kdim = rng.integer(0, d - 1); break;
    case Profile::with_K: kdim = rng.integer(1, d); break;
    default: break;
  }
  const Index d0 = d - kdim;
  Index rank_b = 0;
  switch (profile) {
    case Profile::general: rank_b = rng.integer(0, d0); break;
    case Profile::positive_B: rank_b = d0; break;
    case Profile::with_K: rank_b = d0 == 0 ? 0 : rng.integer(0, d0 - 1); break;
    default: break;
  }
  const Matrix Ut = rng.unitary(d);
  tau.mul_basis = Ut.leftCols(kdim);
  const Matrix h0 = Ut.rightCols(d0);
  tau.A = h0 * rng.hermitian(d0) * h0.adjoint();
  tau.B = h0 * rng.psd(d0, rank_b) * h0.adjoint();
  const Index poles = d0 == 0 ? 0 : rng.integer(0, bounds.max_poles);
  for (const double alpha : distinct_alphas(rng, poles))
    tau.poles.push_back({alpha, h0 * rng.psd(d0, rng.integer(1, d0)) * h0.adjoint()});
  return inst;
}

}  // namespace relext
