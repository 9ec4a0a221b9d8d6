#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <string>

#include "singcrit/apps.hpp"
#include "support/fuzz.hpp"

using namespace singcrit;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no singcrit::Error thrown";
  return ErrorCode::InvalidArgument;
}

CurveJets curve(const char* text, int order = kDefaultOrder) { return parse_curve(text).jets(order); }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

/// Random space curve with sigma'(0), sigma''(0) independent (polynomials of degree 5).
CurveJets random_curve(fuzz::Rng& rng, int order) {
  CurveJets c;
  for (int i = 0; i < 3; ++i) {
    c[i] = Jet1(order);
    for (int j = 1; j <= std::min(5, order); ++j) c[i].set(j, fuzz::uniform(rng, -1.0, 1.0));
  }
  c[0].set(1, c[0].coeff(1) + 2.0);  // keep the velocity away from zero
  c[1].set(2, c[1].coeff(2) + 2.0);  // and the curvature away from zero
  return c;
}

double max_gap(const Jet1& a, const Jet1& b, int through) {
  double g = 0.0;
  for (int i = 0; i <= through; ++i) g = std::max(g, std::fabs(a.coeff(i) - b.coeff(i)));
  return g;
}

}  // namespace

TEST(Frenet, HelixHasConstantCurvatureAndTorsion) {
  // kappa = a / (a^2 + b^2), tau = b / (a^2 + b^2) for (a cos t, a sin t, b t).
  const double a = 1.0, b = 1.0;
  const FrenetData fr = frenet(curve("(cos(t), sin(t), t)"));
  for (int i = 0; i <= fr.kappa.order(); ++i) EXPECT_NEAR(fr.kappa.coeff(i), i == 0 ? a / (a * a + b * b) : 0.0, 1e-14);
  for (int i = 0; i <= fr.tau.order(); ++i) EXPECT_NEAR(fr.tau.coeff(i), i == 0 ? b / (a * a + b * b) : 0.0, 1e-14);
}

TEST(Frenet, Errors) {
  EXPECT_EQ(code_of([] { (void)frenet(curve("(t, t^3, 0)")); }), ErrorCode::CurvatureVanishes);
  EXPECT_EQ(code_of([] { (void)frenet(curve("(t^2, t^3, t^4)")); }), ErrorCode::NotRegular);
}

TEST(Frenet, TorsionVanishingToSecondOrder) {
  // det(s', s'', s''') = 60 t^2 and |s' x s''|^2 = 1 + 400 t^6 + 225 t^8, so
  // tau = 60 t^2 + O(t^8).
  const FrenetData fr = frenet(curve("(t, t^2/2, t^5)", 10));
  ASSERT_EQ(fr.tau.order(), 7);
  for (int i = 0; i <= 7; ++i) EXPECT_NEAR(fr.tau.coeff(i), i == 2 ? 60.0 : 0.0, 1e-12);
  EXPECT_NEAR(fr.tau.extract({2}), 120.0, 1e-10);
}

TEST(Frenet, OrthonormalFrameAndSerretEquations) {
  fuzz::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveJets s = random_curve(rng, 10);
    const FrenetData fr = frenet(s);
    const int n = 6;
    const Jet1Triple e = truncated(fr.e, n), nn = truncated(fr.n, n), b = truncated(fr.b, n);
    const Jet1 one(n, 1.0), zero(n);
    EXPECT_LE(max_gap(dot(e, e), one, n), 1e-10);
    EXPECT_LE(max_gap(dot(nn, nn), one, n), 1e-10);
    EXPECT_LE(max_gap(dot(b, b), one, n), 1e-10);
    EXPECT_LE(max_gap(dot(e, nn), zero, n), 1e-10);
    EXPECT_LE(max_gap(dot(e, b), zero, n), 1e-10);
    EXPECT_LE(max_gap(dot(nn, b), zero, n), 1e-10);
    EXPECT_GT(fr.kappa.constant_term(), 0.0);

    // de/dt = |s'| kappa n and db/dt = -|s'| tau n.
    const Jet1 speed = fr.speed.truncated(n), kappa = fr.kappa.truncated(n), tau = fr.tau.truncated(n);
    const Jet1Triple de = truncated(derivative(fr.e), n), db = truncated(derivative(fr.b), n);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LE(max_gap(de[i], speed * kappa * nn[i], n), 1e-9);
      EXPECT_LE(max_gap(db[i], -1.0 * (speed * tau * nn[i]), n), 1e-9);
    }
  }
}

TEST(Frenet, ArclengthHasUnitSpeed) {
  const CurveJets s = arclength_reparametrize(curve("(t, t^2/2, t^5)", 10));
  const Jet1Triple v = derivative(s);
  const Jet1 speed2 = dot(v, v);
  for (int i = 0; i <= speed2.order(); ++i) EXPECT_NEAR(speed2.coeff(i), i == 0 ? 1.0 : 0.0, 1e-12);
}

TEST(TangentDevelopable, TorsionOrderDecidesTheSingularity) {
  EXPECT_EQ(classify_frontal(tangent_developable(curve("(t, t^2/2, t^5)"))).label(), "cS1+");
  EXPECT_EQ(classify_frontal(tangent_developable(curve("(t, t^2/2, -t^5)"))).label(), "cS1+");
  EXPECT_EQ(classify_frontal(tangent_developable(curve("(t, t^2/2, t^3/6)"))).label(), "cuspidal_edge");
  EXPECT_EQ(classify_frontal(tangent_developable(curve("(t, t^2/2, t^4/24)"))).label(), "cCR");
  EXPECT_EQ(classify_frontal(tangent_developable(curve("(cos(t), sin(t), t)"))).label(), "cuspidal_edge");
  EXPECT_EQ(code_of([] { (void)tangent_developable(curve("(t, t^3, 0)")); }), ErrorCode::CurvatureVanishes);
}

// With arclength parametrization and nu = b, the psi-series of the tangent
// developable is the negated torsion.
TEST(TangentDevelopable, PsiIsMinusTorsion) {
  fuzz::Rng rng(42);
  const int order = 12;
  for (int trial = 0; trial < 20; ++trial) {
    const CurveJets s = arclength_reparametrize(random_curve(rng, order));
    const FrenetData fr = frenet(s);
    const FrontalAnalysis an = analyze_frontal(tangent_developable(s));
    ASSERT_TRUE(an.null.has_value());
    const Jet1 psi = psi_jet(tangent_developable(s), *an.normal, *an.gamma, *an.null);
    ASSERT_GE(psi.order(), 6);
    ASSERT_GE(fr.tau.order(), 6);
    const double scale = std::max(1.0, fr.tau.truncated(6).max_abs());
    for (int i = 0; i <= 6; ++i) EXPECT_NEAR(psi.coeff(i), -fr.tau.coeff(i), 1e-9 * scale) << "trial " << trial;
  }
}

TEST(Fold, KernelAndChecks) {
  const FoldSpec fold = parse_fold("(x, y, z^2)", "z");
  EXPECT_NEAR(std::fabs(fold.kernel_dir[2]), 1.0, 1e-15);
  EXPECT_NEAR(fold.kernel_dir[0], 0.0, 1e-15);

  const FrontalGerm g = parse_frontal("(u, v^2, u^2 + v^2 + v^3)").jets(kDefaultOrder);
  const FoldComposition comp = fold_compose(g, fold);
  EXPECT_TRUE(comp.checks.a);
  EXPECT_TRUE(comp.checks.b);
  EXPECT_NEAR(comp.checks.nu0[1], -2.0, 1e-12);
  EXPECT_NEAR(comp.checks.nu0[2], 2.0, 1e-12);
  // Third component of F o f is (u^2 + v^2 + v^3)^2.
  EXPECT_NEAR(comp.composed[2].coeff(4, 0), 1.0, 1e-12);
  EXPECT_NEAR(comp.composed[2].coeff(0, 5), 2.0, 1e-12);

  const FrontalGerm edge = parse_frontal("(u, v^2, v^3)").jets(kDefaultOrder);
  EXPECT_FALSE(fold_checks(edge, parse_fold("(x^2, y, z)", "x")).a);
  EXPECT_FALSE(fold_checks(edge, fold).b);
  EXPECT_EQ(code_of([] { (void)parse_fold("(x, y, z)", "z"); }), ErrorCode::InvalidArgument);
}

TEST(Fold, ContactOrder) {
  const Expr z = parse_expr("z", {"x", "y", "z"});
  EXPECT_EQ(contact_order(curve("(t, 0, t^2)"), z), 2);
  EXPECT_EQ(contact_order(curve("(t, 0, t^3)"), z), 3);
  EXPECT_EQ(code_of([&] { (void)contact_order(curve("(t, 0, 0)"), z); }), ErrorCode::OrderExceedsTruncation);
  EXPECT_EQ(code_of([&] { (void)contact_order(curve("(t, 0, 1 + t)"), z); }), ErrorCode::PreconditionFailed);
}

TEST(Fold, PredictionMatchesDirectClassification) {
  const FoldSpec fold = parse_fold("(x, y, z^2)", "z");
  const struct {
    const char* map;
    const char* label;
  } cases[] = {{"(u, v^2, u^2 + v^2 + v^3)", "cS1+"},
               {"(u, v^2, -u^2 + v^2 + v^3)", "cS1-"},
               {"(u, v^2, u^3 + v^2 + v^3)", "cS2"},
               {"(u, v^2, u + v^2 + v^3)", "cCR"}};
  for (const auto& c : cases) {
    const FrontalGerm g = parse_frontal(c.map).jets(kDefaultOrder);
    EXPECT_EQ(predict_fold_class(g, fold).label(), c.label) << c.map;
    EXPECT_EQ(classify_frontal({fold_compose(g, fold).composed, std::nullopt}).label(), c.label) << c.map;
  }
}

TEST(Fold, PreconditionsAreEnforced) {
  const FoldSpec fold = parse_fold("(x, y, z^2)", "z");
  EXPECT_EQ(code_of([&] { (void)predict_fold_class(parse_frontal("(u, v^2, v^3*(u^2+v^2))").jets(9), fold); }),
            ErrorCode::PreconditionFailed);
  EXPECT_EQ(code_of([&] { (void)predict_fold_class(parse_frontal("(u, v^2, v^3)").jets(9), fold); }),
            ErrorCode::PreconditionFailed);
}

// Adapted form f = (u, v^2, a3(u) + v^2 b3(u, v)) under the fold (x, y, z^2):
// the contact order is the valuation k of a3, and for even k the sign is that
// of a3^(k)(0) b3(0, 0).
TEST(Fold, RandomAdaptedGerms) {
  fuzz::Rng rng(43);
  const FoldSpec fold = parse_fold("(x, y, z^2)", "z");
  const int order = 12;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + trial % 5;
    const double lead = fuzz::signed_scale(rng, 0.5, 2.0);
    std::string a3 = num(lead) + "*u^" + std::to_string(k);
    for (int j = k + 1; j <= k + 2; ++j) a3 += " + " + num(fuzz::uniform(rng, -1.0, 1.0)) + "*u^" + std::to_string(j);
    const double b00 = fuzz::signed_scale(rng, 0.5, 2.0);
    const std::string b3 = num(b00) + " + " + num(fuzz::signed_scale(rng, 0.5, 2.0)) + "*v + " +
                           num(fuzz::uniform(rng, -1.0, 1.0)) + "*u + " + num(fuzz::uniform(rng, -1.0, 1.0)) + "*u*v";
    const std::string map = "(u, v^2, " + a3 + " + v^2*(" + b3 + "))";
    const FrontalGerm g = parse_frontal(map).jets(order);

    const Classification predicted = predict_fold_class(g, fold);
    const Classification direct = classify_frontal({fold_compose(g, fold).composed, std::nullopt});
    EXPECT_EQ(predicted.label(), direct.label()) << map;
    EXPECT_EQ(*predicted.diagnostics.fold_c, k) << map;
    if (k == 1) {
      EXPECT_EQ(predicted.kind, Kind::CuspidalCrossCap);
    } else {
      EXPECT_EQ(predicted.index, k - 1);
      EXPECT_EQ(predicted.sign, k % 2 == 0 ? (lead * b00 > 0 ? 1 : -1) : 0) << map;
    }
  }
}
