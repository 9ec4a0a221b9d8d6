#pragma once

// Frontal surfaces: normal field, signed area density, singular curve, null
// vector field, the psi-series and the criteria for cuspidal edges, cuspidal
// cross caps and cuspidal S_k singularities.  Also the (2,5)-cusp test for
// space curves.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "singcrit/classification.hpp"
#include "singcrit/germ.hpp"

namespace singcrit {

/// A map germ with its normal field; an empty `normal` asks for the automatic
/// construction from f_u x f_v.
struct FrontalGerm {
  MapJets map;
  std::optional<Jet2Triple> normal;
};

/// Expression-level frontal: what the command line hands over.
struct FrontalSpec {
  MapGerm map;
  std::optional<std::array<Expr, 3>> normal;

  FrontalGerm jets(int order = kDefaultOrder) const {
    FrontalGerm g{map.jets(order), std::nullopt};
    if (normal) {
      const MapGerm nu{*normal, map.base_point};
      g.normal = nu.jets(order);
    }
    return g;
  }
};

/// `normal_text` is a 3-tuple in (u, v) or the word "auto".
inline FrontalSpec parse_frontal(std::string_view map_text, std::string_view normal_text = "auto",
                                 Vec2 base_point = {0.0, 0.0}) {
  FrontalSpec spec{parse_map(map_text, base_point), std::nullopt};
  if (normal_text != "auto") spec.normal = parse_map(normal_text, base_point).components;
  return spec;
}

struct NormalField {
  Jet2Triple nu;
  bool automatic = false;
  std::array<int, 2> content{0, 0};  // exponents (a, b) of the monomial u^a v^b divided out
  int divisor_component = -1;        // >= 0 when f_u x f_v was divided by that component instead
  double residual = 0.0;             // largest coefficient of <f_u, nu>, <f_v, nu>
};

namespace detail {

inline double orthogonality_residual(const MapJets& f, const Jet2Triple& nu) {
  const Jet2 ru = dot_aligned(derivative(f, 0), nu);
  const Jet2 rv = dot_aligned(derivative(f, 1), nu);
  return std::max(ru.max_abs(), rv.max_abs());
}

inline Jet2 divide_monomial(const Jet2& j, int a, int b, int order) {
  Jet2 r(order);
  Jet2::for_each_index(order, [&](const Jet2::MultiIndex& idx) { r.set(idx, j.coeff(idx[0] + a, idx[1] + b)); });
  return r;
}

/// Fallback when the common factor of f_u x f_v is not a monomial: divide the
/// cross product by one of its components that carries the common factor with a
/// unit cofactor, i.e. one of lowest vanishing degree. Returns nu with that
/// component identically one.
inline std::optional<std::pair<int, Jet2Triple>> divide_by_component(const Jet2Triple& n, const Tolerance& tol) {
  std::array<int, 3> deg{};
  std::array<double, 3> weight{};
  const double scale = max_abs(n);
  for (int i = 0; i < 3; ++i) {
    deg[i] = n[i].order() + 1;
    for (int d = 0; d <= n[i].order() && deg[i] > n[i].order(); ++d)
      for (int k = 0; k <= d; ++k)
        if (!tol.is_zero(n[i].coeff(d - k, k), scale)) deg[i] = d;
    if (deg[i] <= n[i].order())
      for (int k = 0; k <= deg[i]; ++k) weight[i] = std::max(weight[i], std::fabs(n[i].coeff(deg[i] - k, k)));
  }
  const int lowest = *std::min_element(deg.begin(), deg.end());
  if (lowest > n[0].order()) return std::nullopt;
  std::array<int, 3> candidates{0, 1, 2};
  std::stable_sort(candidates.begin(), candidates.end(), [&](int x, int y) {
    return deg[x] != deg[y] ? deg[x] < deg[y] : weight[x] > weight[y];
  });
  for (int m : candidates) {
    if (deg[m] != lowest) break;
    Jet2Triple nu;
    bool exact = true;
    for (int i = 0; i < 3 && exact; ++i) {
      if (i == m) continue;
      const auto q = divide_exact(n[i], n[m], tol);
      if (!q) exact = false;
      else nu[i] = *q;
    }
    if (!exact) continue;
    const int order = nu[(m + 1) % 3].order();
    nu[m] = Jet2(order, 1.0);
    return std::make_pair(m, nu);
  }
  return std::nullopt;
}

}  // namespace detail

inline NormalField resolve_normal(const FrontalGerm& g, const Tolerance& tol = kDefaultTolerance) {
  const Jet2Triple fu = derivative(g.map, 0);
  const Jet2Triple fv = derivative(g.map, 1);
  const double tangent_scale = std::max(max_abs(fu), max_abs(fv));
  NormalField out;

  if (g.normal) {
    out.nu = *g.normal;
  } else {
    out.automatic = true;
    const Jet2Triple n = cross(truncated(fu, min_order(fu)), truncated(fv, min_order(fu)));
    const double scale = max_abs(n);
    int a = n[0].order() + 1;
    int b = n[0].order() + 1;
    for (const Jet2& comp : n)
      Jet2::for_each_index(comp.order(), [&](const Jet2::MultiIndex& idx) {
        if (tol.is_zero(comp.coeff(idx), scale)) return;
        a = std::min(a, idx[0]);
        b = std::min(b, idx[1]);
      });
    if (a > n[0].order())
      throw Error(ErrorCode::NotFrontal, "f_u x f_v vanishes through the truncation order");
    const int order = n[0].order() - a - b;
    if (order < 0) throw Error(ErrorCode::NotFrontal, "monomial content exceeds the truncation order");
    out.content = {a, b};
    for (int i = 0; i < 3; ++i) out.nu[i] = detail::divide_monomial(n[i], a, b, order);
    if (tol.is_zero(norm(constant_terms(out.nu)), max_abs(out.nu))) {
      const auto divided = detail::divide_by_component(n, tol);
      if (!divided)
        throw Error(ErrorCode::NotFrontal,
                    "f_u x f_v has no common factor leaving a nonvanishing quotient; supply the normal explicitly");
      out.content = {0, 0};
      out.divisor_component = divided->first;
      out.nu = divided->second;
    }
  }

  const Vec3 nu0 = constant_terms(out.nu);
  if (tol.is_zero(norm(nu0), max_abs(out.nu)))
    throw Error(ErrorCode::NotFrontal, "normal field vanishes at the base point");
  out.residual = detail::orthogonality_residual(g.map, out.nu);
  if (!tol.is_zero(out.residual, tangent_scale * max_abs(out.nu)))
    throw Error(ErrorCode::NotOrthogonal,
                "<df, nu> has a coefficient of size " + std::to_string(out.residual));
  return out;
}

struct AreaDensity {
  Jet2 lambda;
  Vec2 dlambda{};
  bool nondegenerate = false;
};

/// lambda = det(f_u, f_v, nu); throws NoSingularity at regular points.
inline AreaDensity area_density(const FrontalGerm& g, const NormalField& nu, const Tolerance& tol = kDefaultTolerance) {
  AreaDensity d;
  d.lambda = det3_aligned(derivative(g.map, 0), derivative(g.map, 1), nu.nu);
  const double scale = d.lambda.max_abs();
  if (!tol.is_zero(d.lambda.constant_term(), scale))
    throw Error(ErrorCode::NoSingularity, "lambda(0) = " + std::to_string(d.lambda.constant_term()));
  if (d.lambda.order() >= 1) d.dlambda = {d.lambda.coeff(1, 0), d.lambda.coeff(0, 1)};
  d.nondegenerate = !tol.is_zero(norm(d.dlambda), scale);
  return d;
}

/// Solves lambda(gamma(t)) = 0 order by order, as a graph over the source
/// coordinate along which lambda changes least.
inline JetPath singular_curve(const AreaDensity& d) {
  if (!d.nondegenerate) throw Error(ErrorCode::DegenerateSingularity, "d lambda(0) = 0");
  const int n = d.lambda.order();
  const int param = std::fabs(d.dlambda[0]) <= std::fabs(d.dlambda[1]) ? 0 : 1;
  const double slope = d.dlambda[1 - param];
  const Jet1 t = Jet1::variable(n);
  Jet1 g(n);
  for (int m = 1; m <= n; ++m) {
    const JetPath trial = param == 0 ? JetPath(t, g) : JetPath(g, t);
    const double residual = compose(d.lambda, trial).coeff(m);
    g.set(m, g.coeff(m) - residual / slope);
  }
  return param == 0 ? JetPath(t, g) : JetPath(g, t);
}

struct NullField {
  std::array<Jet1, 2> eta;
  bool transversal = false;
  int orientation_sign = 1;
  double det_gamma_eta = 0.0;  // det(gamma'(0), eta(0)) after orientation
  double residual = 0.0;       // largest coefficient of df(eta) along gamma
};

/// Kernel field of df along gamma. Its larger component at the base point is
/// fixed (to `scale`, default 1); the sign is then chosen so that
/// (gamma', eta)(0) is positively oriented.
inline NullField null_field(const FrontalGerm& g, const JetPath& gamma, const Tolerance& tol = kDefaultTolerance,
                            double scale = 1.0) {
  const DifferentialData d = differential(g.map, tol);
  if (d.corank != 1) throw Error(ErrorCode::NotCorankOne, "differential has corank " + std::to_string(d.corank));
  const int p = std::fabs(d.kernel_dir[0]) >= std::fabs(d.kernel_dir[1]) ? 0 : 1;
  const int q = 1 - p;
  const Jet1Triple fp = compose(derivative(g.map, p), gamma);
  const Jet1Triple fq = compose(derivative(g.map, q), gamma);
  const Jet1 x = -dot(fq, fp) / dot(fq, fq);

  NullField out;
  const int n = x.order();
  out.eta[static_cast<std::size_t>(p)] = Jet1(n, scale);
  out.eta[static_cast<std::size_t>(q)] = x * scale;

  const Jet1Triple kernel_image = scaled(truncated(fp, n), out.eta[static_cast<std::size_t>(p)]) +
                                  scaled(truncated(fq, n), out.eta[static_cast<std::size_t>(q)]);
  out.residual = max_abs(kernel_image);

  const Vec2 tangent{gamma.u().coeff(1), gamma.v().coeff(1)};
  const Vec2 eta0{out.eta[0].constant_term(), out.eta[1].constant_term()};
  const double det = det2(tangent, eta0);
  out.transversal = !tol.is_zero(det, norm(tangent) * norm(eta0));
  if (out.transversal && det < 0) {
    out.orientation_sign = -1;
    out.eta = {-out.eta[0], -out.eta[1]};
  }
  out.det_gamma_eta = det * out.orientation_sign;
  return out;
}

struct PsiData {
  Jet1 psi;
  int order_k = 0;
  double leading_b = 0.0;
};

/// psi(t) = det((f o gamma)', nu o gamma, d nu(eta)).
inline Jet1 psi_jet(const FrontalGerm& g, const NormalField& nu, const JetPath& gamma, const NullField& eta) {
  const Jet1Triple gamma_hat = compose(g.map, gamma);
  const Jet1Triple velocity = derivative(gamma_hat);
  const Jet1Triple nu_gamma = compose(nu.nu, gamma);
  const Jet1Triple nu_u = compose(derivative(nu.nu, 0), gamma);
  const Jet1Triple nu_v = compose(derivative(nu.nu, 1), gamma);
  const int n = std::min({min_order(nu_u), eta.eta[0].order(), eta.eta[1].order()});
  const Jet1Triple dnu = scaled(truncated(nu_u, n), eta.eta[0].truncated(n)) +
                         scaled(truncated(nu_v, n), eta.eta[1].truncated(n));
  return det3_aligned(velocity, nu_gamma, dnu);
}

inline PsiData psi_series(const FrontalGerm& g, const NormalField& nu, const JetPath& gamma, const NullField& eta,
                          const Tolerance& tol = kDefaultTolerance) {
  if (!eta.transversal)
    throw Error(ErrorCode::PreconditionFailed, "the null vector is not transverse to the singular curve");
  PsiData out;
  out.psi = psi_jet(g, nu, gamma, eta);
  const VanishingOrder vo = vanishing_order(out.psi, tol);
  out.order_k = vo.k;
  out.leading_b = vo.leading;
  return out;
}

/// Free coefficients of the test curve
///   c(t) = t eta(0) + t^2/2 w2 + t^3/6 w3 + t^4/24 w4 + t^5/120 w5.
/// The component of w3 along xi is adjusted to make (f o c)''' parallel to
/// (f o c)''.
struct CurveChoice {
  Vec2 w2{0.0, 0.0};
  Vec2 w3{0.0, 0.0};
  Vec2 w4{0.0, 0.0};
  Vec2 w5{0.0, 0.0};
};

struct BData {
  JetPath curve;
  Jet1Triple c_hat;
  double ell = 0.0;
  double a_value = 0.0;
  double a_scale = 0.0;  // magnitude the zero test on a_value is measured against
};

namespace detail {

inline JetPath test_curve(const Vec2& eta0, const CurveChoice& c, int order) {
  std::array<Jet1, 2> comp{Jet1(order), Jet1(order)};
  const std::array<const Vec2*, 4> w{&c.w2, &c.w3, &c.w4, &c.w5};
  const double fact[] = {2.0, 6.0, 24.0, 120.0};
  for (std::size_t i = 0; i < 2; ++i) {
    if (order >= 1) comp[i].set(1, eta0[i]);
    for (int j = 2; j <= 5 && j <= order; ++j) comp[i].set(j, (*w[static_cast<std::size_t>(j - 2)])[i] / fact[j - 2]);
  }
  return {comp[0], comp[1]};
}

inline std::array<Vec3, 6> derivatives_to_five(const Jet1Triple& c) {
  std::array<Vec3, 6> d{};
  for (int k = 0; k <= 5; ++k) d[static_cast<std::size_t>(k)] = derivative_at_zero(c, k);
  return d;
}

inline Vec3 combo(double a, const Vec3& x, double b, const Vec3& y) {
  return {a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]};
}

}  // namespace detail

/// Finds a curve c tangent to eta(0) with (f o c)'''(0) = ell (f o c)''(0) and
/// evaluates a = det(gamma_hat', c_hat'', 3 c_hat^(5) - 10 ell c_hat^(4))(0).
inline BData condition_b_curve(const FrontalGerm& g, const JetPath& gamma, const NullField& eta,
                               const CurveChoice& choice = {}, const Tolerance& tol = kDefaultTolerance) {
  const int order = min_order(g.map);
  if (order < 5) throw Error(ErrorCode::OrderExceedsTruncation, "condition (b) needs jets of order >= 5");
  const DifferentialData d = differential(g.map, tol);
  const Frame frame = null_frame(d);
  const Vec3 f_xi = detail::combo(frame.xi[0], d.jacobian[0], frame.xi[1], d.jacobian[1]);
  const Vec2 eta0{eta.eta[0].constant_term(), eta.eta[1].constant_term()};

  CurveChoice trial = choice;
  JetPath curve = detail::test_curve(eta0, trial, order);
  Jet1Triple c_hat = compose(g.map, curve);
  auto dv = detail::derivatives_to_five(c_hat);
  const double c_scale = std::max({norm(dv[2]), norm(dv[3]), norm(dv[4]), norm(dv[5])});
  if (tol.is_zero(norm(dv[2]), c_scale))
    throw Error(ErrorCode::CurveDegenerate, "(f o c)''(0) vanishes");

  // Least squares for ell and s in  c''' + s f_xi = ell c''.
  const Vec3& c2 = dv[2];
  const Vec3& c3 = dv[3];
  const double g11 = dot(c2, c2), g12 = -dot(c2, f_xi), g22 = dot(f_xi, f_xi);
  const double r1 = dot(c2, c3), r2 = -dot(f_xi, c3);
  const double gram_det = g11 * g22 - g12 * g12;
  double ell = 0.0;
  double s = 0.0;
  if (tol.is_zero(gram_det, g11 * g22)) {
    ell = r1 / g11;
  } else {
    ell = (g22 * r1 - g12 * r2) / gram_det;
    s = (g11 * r2 - g12 * r1) / gram_det;
  }
  const Vec3 residual = detail::combo(1.0, detail::combo(1.0, c3, -ell, c2), s, f_xi);
  if (!tol.is_zero(norm(residual), norm(c3) + std::fabs(ell) * norm(c2) + std::fabs(s) * norm(f_xi)))
    throw Error(ErrorCode::ParallelismUnsolvable,
                "(f o c)'''(0) leaves the plane spanned by (f o c)''(0) and the image of df");

  trial.w3 = {trial.w3[0] + s * frame.xi[0], trial.w3[1] + s * frame.xi[1]};
  curve = detail::test_curve(eta0, trial, order);
  c_hat = compose(g.map, curve);
  dv = detail::derivatives_to_five(c_hat);

  const Vec2 tangent{gamma.u().coeff(1), gamma.v().coeff(1)};
  const Vec3 gamma_hat_velocity = detail::combo(tangent[0], d.jacobian[0], tangent[1], d.jacobian[1]);
  const Vec3 top = detail::combo(3.0, dv[5], -10.0 * ell, dv[4]);

  BData out{curve, c_hat, ell, det3(gamma_hat_velocity, dv[2], top), 0.0};
  out.a_scale = norm(gamma_hat_velocity) * norm(dv[2]) * std::max(3.0 * norm(dv[5]), 10.0 * std::fabs(ell) * norm(dv[4]));
  return out;
}

/// Choices the criteria must not depend on, exposed so they can be varied.
struct FrontalOptions {
  int max_k = kDefaultMaxK;
  Tolerance tol{};
  int gamma_direction = 1;  // -1 reverses the singular curve's parameter
  double eta_scale = 1.0;   // any nonzero rescaling of the null vector field
  CurveChoice curve{};
};

/// Every intermediate stage of the frontal pipeline that was reached.
struct FrontalAnalysis {
  std::optional<NormalField> normal;
  std::optional<AreaDensity> density;
  std::optional<JetPath> gamma;
  std::optional<NullField> null;
  std::optional<PsiData> psi;
  std::optional<BData> b;
  Classification result;
};

inline FrontalAnalysis analyze_frontal(const FrontalGerm& g, const FrontalOptions& opts = {}) {
  FrontalAnalysis an;
  Diagnostics diag;
  auto fail = [&](std::string reason) {
    an.result = Classification::unrecognized(std::move(reason), diag);
    return an;
  };

  const DifferentialData d = differential(g.map, opts.tol);
  diag.corank = d.corank;
  if (d.corank == 0) {
    an.result.kind = Kind::Regular;
    an.result.diagnostics = diag;
    return an;
  }
  if (d.corank == 2) return fail("corank2");

  try {
    an.normal = resolve_normal(g, opts.tol);
    an.density = area_density(g, *an.normal, opts.tol);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoSingularity) {
      an.result.kind = Kind::Regular;
      an.result.diagnostics = diag;
      return an;
    }
    return fail(std::string("normal field: ") + e.what());
  }
  if (!an.density->nondegenerate) {
    diag.cond_a = false;
    return fail("condition (a): degenerate singular point (d lambda(0) = 0)");
  }

  try {
    JetPath gamma = singular_curve(*an.density);
    if (opts.gamma_direction < 0) gamma = gamma.reversed();
    an.gamma = gamma;
    an.null = null_field(g, gamma, opts.tol, opts.eta_scale);
  } catch (const Error& e) {
    return fail(std::string("singular curve: ") + e.what());
  }
  diag.cond_a = an.null->transversal;
  if (!an.null->transversal) return fail("condition (a): null vector tangent to the singular curve");

  try {
    an.psi = psi_series(g, *an.normal, *an.gamma, *an.null, opts.tol);
  } catch (const Error& e) {
    return fail(std::string("psi: ") + e.what());
  }
  const int k = an.psi->order_k;
  {
    std::vector<double> coeffs(an.psi->psi.coeffs().begin(), an.psi->psi.coeffs().end());
    diag.psi_coefficients = std::move(coeffs);
  }
  diag.order_k = k;
  diag.leading_b = an.psi->leading_b;
  diag.cond_c = true;
  if (k > opts.max_k) return fail("psi vanishes to order " + std::to_string(k) + " > max_k");

  Classification c;
  if (k == 0) {
    c.kind = Kind::CuspidalEdge;
  } else if (k == 1) {
    c.kind = Kind::CuspidalCrossCap;
  } else {
    try {
      an.b = condition_b_curve(g, *an.gamma, *an.null, opts.curve, opts.tol);
    } catch (const Error& e) {
      diag.cond_b = false;
      return fail(std::string("condition (b): ") + e.what());
    }
    diag.ell = an.b->ell;
    diag.a_value = an.b->a_value;
    diag.ab_product = an.b->a_value * an.psi->leading_b;
    if (opts.tol.is_zero(an.b->a_value, an.b->a_scale)) {
      diag.cond_b = false;
      return fail("condition (b): a = 0");
    }
    diag.cond_b = true;
    c.kind = Kind::CuspidalSk;
    c.index = k - 1;
    if (k % 2 == 0) {
      c.sign = *diag.ab_product > 0 ? 1 : -1;
      diag.cond_d = true;
    }
  }
  c.diagnostics = diag;
  an.result = c;
  return an;
}

inline Classification classify_frontal(const FrontalGerm& g, const FrontalOptions& opts = {}) {
  return analyze_frontal(g, opts).result;
}

/// (2,5)-cusp recognition for a space curve germ at its base point.
inline Classification classify_curve_cusp25(const CurveJets& c, const Tolerance& tol = kDefaultTolerance) {
  if (min_order(c) < 5) throw Error(ErrorCode::OrderExceedsTruncation, "the (2,5)-cusp test needs order >= 5");
  const auto d = detail::derivatives_to_five(c);
  double scale = 0.0;
  for (int k = 1; k <= 5; ++k) scale = std::max(scale, norm(d[static_cast<std::size_t>(k)]));
  if (!tol.is_zero(norm(d[1]), scale)) throw Error(ErrorCode::NotSingular, "c'(0) != 0");
  if (tol.is_zero(norm(d[2]), scale)) throw Error(ErrorCode::DegenerateSecond, "c''(0) = 0");

  Classification out;
  out.kind = Kind::NotCusp25;
  if (!tol.is_zero(norm(cross(d[2], d[3])), norm(d[2]) * norm(d[3]))) {
    out.reasons.push_back("third derivative transverse to the second");
    return out;
  }
  const double ell = dot(d[3], d[2]) / dot(d[2], d[2]);
  out.diagnostics.ell = ell;
  const Vec3 top = detail::combo(3.0, d[5], -10.0 * ell, d[4]);
  const double top_scale = std::max(3.0 * norm(d[5]), 10.0 * std::fabs(ell) * norm(d[4]));
  if (tol.is_zero(norm(cross(d[2], top)), norm(d[2]) * top_scale)) {
    out.reasons.push_back("3c'''''(0) - 10 ell c''''(0) is parallel to c''(0)");
    return out;
  }
  out.kind = Kind::Cusp25;
  return out;
}

}  // namespace singcrit
