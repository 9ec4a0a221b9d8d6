#pragma once

// Map germs from the plane to 3-space, their differential at the base point,
// and the corank-one criteria built on
//   phi = det(xi f, eta f, eta eta f)
// for constant vector fields (xi, eta) with eta spanning ker df.

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "singcrit/classification.hpp"
#include "singcrit/expr.hpp"
#include "singcrit/linalg.hpp"

namespace singcrit {

using MapJets = Jet2Triple;
using CurveJets = Jet1Triple;

struct MapGerm {
  std::array<Expr, 3> components;
  Vec2 base_point{0.0, 0.0};

  /// Taylor jets at the base point in local coordinates (u - u0, v - v0).
  MapJets jets(int order = kDefaultOrder) const {
    const std::array<Jet2, 2> vars{Jet2::variable(order, 0, base_point[0]), Jet2::variable(order, 1, base_point[1])};
    const std::span<const Jet2> values(vars);
    return {components[0].evaluate(values), components[1].evaluate(values), components[2].evaluate(values)};
  }

  Vec3 evaluate(double u, double v) const {
    const std::array<double, 2> vars{u, v};
    const std::span<const double> values(vars);
    return {components[0].evaluate(values), components[1].evaluate(values), components[2].evaluate(values)};
  }

  std::string to_string() const {
    return "(" + components[0].to_string() + ", " + components[1].to_string() + ", " + components[2].to_string() + ")";
  }
};

struct CurveGerm {
  std::array<Expr, 3> components;
  double base_point = 0.0;

  CurveJets jets(int order = kDefaultOrder) const {
    const std::array<Jet1, 1> vars{Jet1::variable(order, 0, base_point)};
    const std::span<const Jet1> values(vars);
    return {components[0].evaluate(values), components[1].evaluate(values), components[2].evaluate(values)};
  }

  std::string to_string() const {
    return "(" + components[0].to_string() + ", " + components[1].to_string() + ", " + components[2].to_string() + ")";
  }
};

namespace detail {

inline std::array<Expr, 3> three_components(std::string_view text, std::vector<std::string> vars) {
  auto parts = parse_components(text, std::move(vars));
  if (parts.size() != 3)
    throw Error(ErrorCode::ArityError, "expected 3 components, got " + std::to_string(parts.size()));
  return {parts[0], parts[1], parts[2]};
}

}  // namespace detail

inline MapGerm parse_map(std::string_view text, Vec2 base_point = {0.0, 0.0}) {
  return {detail::three_components(text, {"u", "v"}), base_point};
}

inline CurveGerm parse_curve(std::string_view text, double base_point = 0.0) {
  return {detail::three_components(text, {"t"}), base_point};
}

struct DifferentialData {
  std::array<Vec3, 2> jacobian{};  // columns df(d/du), df(d/dv)
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int rank = 0;
  int corank = 2;
  Vec2 kernel_dir{0.0, 0.0};  // meaningful when corank == 1
};

/// Rank of df at the base point from the singular values of the 3x2 jacobian.
inline DifferentialData differential(const MapJets& f, const Tolerance& tol = kDefaultTolerance) {
  DifferentialData d;
  for (int r = 0; r < 3; ++r) {
    d.jacobian[0][r] = f[r].coeff(1, 0);
    d.jacobian[1][r] = f[r].coeff(0, 1);
  }
  const double a = dot(d.jacobian[0], d.jacobian[0]);
  const double b = dot(d.jacobian[0], d.jacobian[1]);
  const double c = dot(d.jacobian[1], d.jacobian[1]);
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  d.sigma_max = std::sqrt(mean + radius);
  // sigma_min * sigma_max = |f_u x f_v|; this avoids the cancellation in
  // mean - radius when the jacobian is (nearly) rank one.
  d.sigma_min = d.sigma_max > 0.0 ? norm(cross(d.jacobian[0], d.jacobian[1])) / d.sigma_max : 0.0;
  const double mu_min = d.sigma_min * d.sigma_min;

  const double entry_scale = std::max(max_abs(d.jacobian[0]), max_abs(d.jacobian[1]));
  if (tol.is_zero(d.sigma_max, entry_scale)) {
    d.rank = 0;
  } else if (tol.is_zero(d.sigma_min, d.sigma_max)) {
    d.rank = 1;
  } else {
    d.rank = 2;
  }
  d.corank = 2 - d.rank;

  if (d.rank == 1) {
    // Eigenvector of J^T J for the small eigenvalue.
    Vec2 k1{b, mu_min - a};
    Vec2 k2{mu_min - c, b};
    Vec2 k = norm(k1) >= norm(k2) ? k1 : k2;
    const double n = norm(k);
    k = {k[0] / n, k[1] / n};
    if (std::fabs(k[0]) >= std::fabs(k[1]) ? k[0] < 0 : k[1] < 0) k = {-k[0], -k[1]};
    d.kernel_dir = k;
  }
  return d;
}

/// Constant vector fields: eta spans the kernel, xi completes it to a basis.
struct Frame {
  Vec2 xi;
  Vec2 eta;
};

inline Frame null_frame(const DifferentialData& d) {
  if (d.corank != 1)
    throw Error(ErrorCode::NotCorankOne, "differential has corank " + std::to_string(d.corank));
  const Vec2 eta = d.kernel_dir;
  const Vec2 axis = std::fabs(det2({1.0, 0.0}, eta)) >= std::fabs(det2({0.0, 1.0}, eta)) ? Vec2{1.0, 0.0}
                                                                                           : Vec2{0.0, 1.0};
  const double along = axis[0] * eta[0] + axis[1] * eta[1];
  Vec2 xi{axis[0] - along * eta[0], axis[1] - along * eta[1]};
  const double n = norm(xi);
  xi = {xi[0] / n, xi[1] / n};
  return {xi, eta};
}

inline Frame null_frame(const MapJets& f, const Tolerance& tol = kDefaultTolerance) {
  return null_frame(differential(f, tol));
}

/// Derivative of f along the constant field w.
inline Jet2Triple directional(const MapJets& f, const Vec2& w) {
  Jet2Triple r;
  for (int i = 0; i < 3; ++i) r[i] = f[i].derivative(0) * w[0] + f[i].derivative(1) * w[1];
  return r;
}

inline Jet2Triple second_directional(const MapJets& f, const Vec2& w) {
  Jet2Triple r;
  for (int i = 0; i < 3; ++i) {
    const Jet2 fu = f[i].derivative(0);
    const Jet2 fv = f[i].derivative(1);
    r[i] = fu.derivative(0) * (w[0] * w[0]) + fu.derivative(1) * (2.0 * w[0] * w[1]) + fv.derivative(1) * (w[1] * w[1]);
  }
  return r;
}

struct PhiData {
  Jet2 phi;
  Vec2 gradient{};
  std::array<Vec2, 2> hessian{};
  double hess_det = 0.0;
  bool critical = false;
  int hess_sign = 0;
  bool indep_test = false;
  Vec3 xi_f{};
  Vec3 eta_eta_f{};
};

inline PhiData phi_field(const MapJets& f, const Frame& frame, const Tolerance& tol = kDefaultTolerance) {
  if (min_order(f) < 4) throw Error(ErrorCode::OrderExceedsTruncation, "the phi criteria need jets of order >= 4");
  const Jet2Triple xf = directional(f, frame.xi);
  const Jet2Triple ef = directional(f, frame.eta);
  const Jet2Triple eef = second_directional(f, frame.eta);

  PhiData p;
  p.phi = det3_aligned(xf, ef, eef);
  p.gradient = {p.phi.extract({1, 0}), p.phi.extract({0, 1})};
  const double huu = p.phi.extract({2, 0});
  const double huv = p.phi.extract({1, 1});
  const double hvv = p.phi.extract({0, 2});
  p.hessian = {Vec2{huu, huv}, Vec2{huv, hvv}};
  p.hess_det = huu * hvv - huv * huv;

  p.critical = tol.is_zero(norm(p.gradient), p.phi.max_abs());
  const double hess_scale = std::max(std::fabs(huu * hvv), huv * huv);
  p.hess_sign = tol.is_zero(p.hess_det, hess_scale) ? 0 : (p.hess_det > 0 ? 1 : -1);

  p.xi_f = constant_terms(xf);
  p.eta_eta_f = constant_terms(eef);
  const double cross_norm = norm(cross(p.xi_f, p.eta_eta_f));
  p.indep_test = !tol.is_zero(cross_norm, norm(p.xi_f) * norm(p.eta_eta_f));
  return p;
}

/// Whitney umbrella and Chen-Matumoto-Mond S1+/- recognition.
inline Classification classify_corank1(const MapJets& f, const Tolerance& tol = kDefaultTolerance) {
  const DifferentialData d = differential(f, tol);
  Diagnostics diag;
  diag.corank = d.corank;
  if (d.corank == 0) {
    Classification c;
    c.kind = Kind::Regular;
    c.diagnostics = diag;
    return c;
  }
  if (d.corank == 2) return Classification::unrecognized("corank2", diag);

  const PhiData p = phi_field(f, null_frame(d), tol);
  diag.phi_gradient = p.gradient;
  diag.hess_det = p.hess_det;
  diag.indep_test = p.indep_test;

  Classification c;
  c.diagnostics = diag;
  if (!p.critical) {
    c.kind = Kind::CrossCap;
  } else if (p.hess_sign > 0) {
    c.kind = Kind::CmmMinus;
  } else if (p.hess_sign < 0 && p.indep_test) {
    c.kind = Kind::CmmPlus;
  } else if (p.hess_sign < 0) {
    // Definitive: the phi criterion is an equivalence, so this germ is not S1+.
    c.reasons.push_back("not_cmm: xi f(0) and eta eta f(0) are linearly dependent");
  } else {
    c.reasons.push_back("degenerate_hessian");
  }
  return c;
}

}  // namespace singcrit
