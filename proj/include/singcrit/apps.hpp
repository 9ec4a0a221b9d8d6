#pragma once

// Applications of the frontal criteria: tangent developables of space curves
// (through a jet-level Frenet frame) and compositions of a cuspidal edge with
// a fold map, with a prediction of the resulting singularity from the contact
// order of the cuspidal edge with the fold's critical surface.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "singcrit/frontal.hpp"

namespace singcrit {

struct FrenetData {
  Jet1Triple e;  // unit tangent
  Jet1Triple n;  // principal normal
  Jet1Triple b;  // binormal
  Jet1 kappa;
  Jet1 tau;
  Jet1 speed;    // |sigma'|
};

/// Frenet apparatus of a curve germ, exact to the truncation order (each
/// differentiation costs one order: e has order N-1, n, b, kappa N-2, tau N-3).
inline FrenetData frenet(const CurveJets& sigma, const Tolerance& tol = kDefaultTolerance) {
  const int n = min_order(sigma);
  if (n < 3) throw Error(ErrorCode::OrderExceedsTruncation, "the Frenet frame needs jets of order >= 3");
  const Jet1Triple d1 = derivative(sigma);
  const Jet1Triple d2 = derivative(d1);
  const Jet1Triple d3 = derivative(d2);
  const Vec3 v0 = constant_terms(d1);
  const Vec3 a0 = constant_terms(d2);
  if (tol.is_zero(norm(v0), std::max(max_abs(d1), max_abs(d2))))
    throw Error(ErrorCode::NotRegular, "sigma'(0) = 0");
  if (tol.is_zero(norm(cross(v0, a0)), norm(v0) * norm(a0)))
    throw Error(ErrorCode::CurvatureVanishes, "kappa(0) = 0");

  FrenetData out;
  const Jet1 speed2 = dot(d1, d1);
  out.speed = sqrt(speed2);
  out.e = scaled(d1, 1.0 / out.speed);

  const Jet1Triple d1t = truncated(d1, n - 2);
  const Jet1Triple c = cross(d1t, d2);
  const Jet1 c2 = dot(c, c);
  const Jet1 cn = sqrt(c2);
  out.b = scaled(c, 1.0 / cn);
  out.n = cross(out.b, truncated(out.e, n - 2));
  const Jet1 sp = out.speed.truncated(n - 2);
  out.kappa = cn / (sp * sp * sp);
  out.tau = det3(truncated(d1, n - 3), truncated(d2, n - 3), d3) / c2.truncated(n - 3);
  return out;
}

/// The same curve parametrized by arclength s measured from the base point.
inline CurveJets arclength_reparametrize(const CurveJets& sigma, const Tolerance& tol = kDefaultTolerance) {
  const Jet1Triple d1 = derivative(sigma);
  if (tol.is_zero(norm(constant_terms(d1)), max_abs(d1))) throw Error(ErrorCode::NotRegular, "sigma'(0) = 0");
  const Jet1 arclength = integrate(sqrt(dot(d1, d1)));
  const Jet1 t_of_s = revert(arclength);
  return {compose(sigma[0], t_of_s), compose(sigma[1], t_of_s), compose(sigma[2], t_of_s)};
}

/// (t, u) -> sigma(t) + u e(t) at (0, 0), with the binormal as its normal field.
inline FrontalGerm tangent_developable(const CurveJets& sigma, const Tolerance& tol = kDefaultTolerance) {
  const FrenetData fr = frenet(sigma, tol);
  const int n = min_order(sigma);
  FrontalGerm g;
  for (int i = 0; i < 3; ++i) {
    Jet2 comp(n);
    for (int j = 0; j <= n; ++j) comp.set(j, 0, sigma[i].coeff(j));
    for (int j = 0; j + 1 <= n; ++j) comp.set(j, 1, fr.e[i].coeff(j));
    g.map[i] = comp;
  }
  g.normal = Jet2Triple{lift(fr.b[0], 0), lift(fr.b[1], 0), lift(fr.b[2], 0)};
  return g;
}

/// A fold-type map F of 3-space, its critical surface {h = 0} and a vector
/// spanning ker dF at the point where it is applied.
struct FoldSpec {
  std::array<Expr, 3> map;
  Expr surface;
  Vec3 kernel_dir{0.0, 0.0, 1.0};
};

namespace detail {

/// Gradient of a scalar expression in (x, y, z) at p, exact via first-order jets.
inline Vec3 gradient_at(const Expr& e, const Vec3& p) {
  Vec3 g{};
  for (int i = 0; i < 3; ++i) {
    std::array<Jet1, 3> vars{Jet1(1, p[0]), Jet1(1, p[1]), Jet1(1, p[2])};
    vars[static_cast<std::size_t>(i)].set(1, 1.0);
    g[static_cast<std::size_t>(i)] = e.evaluate(std::span<const Jet1>(vars)).coeff(1);
  }
  return g;
}

inline double evaluate_at(const Expr& e, const Vec3& p) {
  const std::array<double, 3> vars{p[0], p[1], p[2]};
  return e.evaluate(std::span<const double>(vars));
}

/// Kernel of a rank-two 3x3 matrix given by its rows: the largest cross
/// product of two rows, normalized.
inline Vec3 kernel_of_rows(const std::array<Vec3, 3>& rows, const Tolerance& tol) {
  Vec3 best{};
  double best_norm = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const Vec3 c = cross(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
      if (norm(c) > best_norm) {
        best = c;
        best_norm = norm(c);
      }
    }
  double row_scale = 0.0;
  for (const Vec3& r : rows) row_scale = std::max(row_scale, norm(r));
  if (tol.is_zero(best_norm, row_scale * row_scale))
    throw Error(ErrorCode::InvalidArgument, "dF has rank below two; no kernel line");
  for (const Vec3& r : rows)
    if (!tol.is_zero(dot(r, best) / best_norm, row_scale))
      throw Error(ErrorCode::InvalidArgument, "dF is invertible at the point; F is not a fold there");
  return {best[0] / best_norm, best[1] / best_norm, best[2] / best_norm};
}

}  // namespace detail

/// Builds a fold specification. Without `kernel`, ker dF is computed at `point`.
inline FoldSpec parse_fold(std::string_view map_text, std::string_view surface_text, const Vec3& point = {0.0, 0.0, 0.0},
                           std::optional<Vec3> kernel = std::nullopt, const Tolerance& tol = kDefaultTolerance) {
  const auto parts = parse_components(map_text, {"x", "y", "z"});
  if (parts.size() != 3)
    throw Error(ErrorCode::ArityError, "fold map needs 3 components, got " + std::to_string(parts.size()));
  FoldSpec spec{{parts[0], parts[1], parts[2]}, parse_expr(surface_text, {"x", "y", "z"}), {}};
  if (kernel) {
    if (tol.is_zero(norm(*kernel), 1.0)) throw Error(ErrorCode::InvalidArgument, "kernel direction is zero");
    spec.kernel_dir = *kernel;
  } else {
    std::array<Vec3, 3> rows{};
    for (int i = 0; i < 3; ++i) rows[static_cast<std::size_t>(i)] = detail::gradient_at(spec.map[static_cast<std::size_t>(i)], point);
    spec.kernel_dir = detail::kernel_of_rows(rows, tol);
  }
  return spec;
}

struct FoldChecks {
  bool a = false;  // nu(0) is not perpendicular to ker dF
  bool b = false;  // the limiting tangent plane differs from the tangent plane of {h = 0}
  Vec3 nu0{};
  Vec3 grad_h{};
};

struct FoldComposition {
  MapJets composed;
  FoldChecks checks;
};

inline FoldChecks fold_checks(const FrontalGerm& g, const FoldSpec& fold, const Tolerance& tol = kDefaultTolerance) {
  FoldChecks c;
  c.nu0 = constant_terms(resolve_normal(g, tol).nu);
  c.grad_h = detail::gradient_at(fold.surface, constant_terms(g.map));
  const Vec3& k = fold.kernel_dir;
  c.a = !tol.is_zero(dot(c.nu0, k), norm(c.nu0) * norm(k));
  c.b = !tol.is_zero(norm(cross(c.nu0, c.grad_h)), norm(c.nu0) * norm(c.grad_h));
  return c;
}

/// F o f as jets, together with the checks (A) and (B).
inline FoldComposition fold_compose(const FrontalGerm& g, const FoldSpec& fold, const Tolerance& tol = kDefaultTolerance) {
  FoldComposition out;
  const std::span<const Jet2> values(g.map);
  for (int i = 0; i < 3; ++i) out.composed[i] = fold.map[static_cast<std::size_t>(i)].evaluate(values);
  out.checks = fold_checks(g, fold, tol);
  return out;
}

/// Order of contact of a curve through {h = 0} with that surface.
inline int contact_order(const Jet1Triple& path, const Expr& surface, const Tolerance& tol = kDefaultTolerance) {
  const std::span<const Jet1> values(path);
  const Jet1 s = surface.evaluate(values);
  if (!tol.is_zero(s.constant_term(), s.max_abs()))
    throw Error(ErrorCode::PreconditionFailed, "the curve does not start on the surface");
  return vanishing_order(s, tol).k;
}

/// Predicts the singularity of F o f from the cuspidal edge f alone: the
/// contact order k of the edge curve with {h = 0} gives cuspidal S_{k-1}, and
/// for even k the sign is + exactly when the image of f lies on the same side
/// of {h = 0} as the edge curve.
inline Classification predict_fold_class(const FrontalGerm& g, const FoldSpec& fold, const FrontalOptions& opts = {}) {
  const FrontalAnalysis an = analyze_frontal(g, opts);
  if (an.result.kind != Kind::CuspidalEdge)
    throw Error(ErrorCode::PreconditionFailed, "f is not a cuspidal edge (classified " + an.result.label() + ")");
  const FoldChecks checks = fold_checks(g, fold, opts.tol);
  if (!checks.a) throw Error(ErrorCode::PreconditionFailed, "condition (A): nu(0) is perpendicular to ker dF");
  if (!checks.b)
    throw Error(ErrorCode::PreconditionFailed, "condition (B): the limiting tangent plane is tangent to S(F)");

  const Jet1Triple edge = compose(g.map, *an.gamma);
  const int k = contact_order(edge, fold.surface, opts.tol);

  Classification c;
  c.diagnostics.corank = 1;
  c.diagnostics.fold_a = checks.a;
  c.diagnostics.fold_b = checks.b;
  c.diagnostics.fold_c = k;
  if (k == 1) {
    c.kind = Kind::CuspidalCrossCap;
    return c;
  }
  c.kind = Kind::CuspidalSk;
  c.index = k - 1;
  if (k % 2 == 0) {
    const std::span<const Jet1> edge_values(edge);
    const double edge_side = fold.surface.evaluate(edge_values).coeff(k);
    // Probe transverse to the edge along the null direction; f leaves the
    // edge quadratically, so h o f changes at order two there.
    const int n = an.gamma->order();
    Jet1 pu(n);
    Jet1 pv(n);
    pu.set(1, an.null->eta[0].constant_term());
    pv.set(1, an.null->eta[1].constant_term());
    const Jet1Triple probe = compose(g.map, JetPath(pu, pv));
    const std::span<const Jet1> probe_values(probe);
    const Jet1 h_probe = fold.surface.evaluate(probe_values);
    const VanishingOrder side = vanishing_order(h_probe, opts.tol);
    c.sign = (edge_side > 0) == (side.leading > 0) ? 1 : -1;
  }
  return c;
}

}  // namespace singcrit
