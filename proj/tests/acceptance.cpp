// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned below.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/battery.hpp"
#include "support/fuzz.hpp"

using namespace singcrit;

namespace {

constexpr double kDiagnosticRelTol = 1e-6;
constexpr double kTorsionRelTol = 1e-9;
constexpr double kCompositionRelTol = 1e-10;
constexpr double kRoundtripRelTol = 1e-12;
constexpr int kInvarianceTrials = 100;
constexpr int kFoldInstances = 20;
constexpr int kCurveTrials = 20;

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::string summary;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) failures.push_back(what);
    }
  }
};

double rel_err(double got, double want) { return std::fabs(got - want) / std::max(std::fabs(want), 1e-300); }

std::string fmt(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

FrontalGerm random_equivalent(fuzz::Rng& rng, const FrontalGerm& g) {
  const fuzz::SourceChange s = fuzz::random_source(rng, kDefaultOrder);
  const fuzz::TargetChange t = fuzz::random_target(rng);
  if (!g.normal) return {t.apply(fuzz::compose(g.map, s)), std::nullopt};
  return fuzz::transform_target(fuzz::transform_source(g, s), t);
}

/// Relative coefficient gap between two univariate jets through order n.
double series_gap(const Jet1& a, const std::vector<double>& b) {
  double gap = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    gap = std::max(gap, std::fabs(a.coeff(static_cast<int>(i)) - b[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  return gap / scale;
}

template <int V>
double jet_gap(const Jet<V>& a, const Jet<V>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) gap = std::max(gap, std::fabs(a.coeffs()[i] - b.coeffs()[i]));
  return gap / std::max({1.0, a.max_abs(), b.max_abs()});
}

Outcome normal_form_battery() {
  Outcome o;
  double worst = 0.0;
  const auto forms = battery::all();
  for (const battery::NormalForm& nf : forms) {
    const Classification c = classify_germ(parse_frontal(nf.map).jets(kDefaultOrder));
    o.check(c.label() == nf.label, nf.name + " labeled " + c.label());
    const Diagnostics& d = c.diagnostics;
    auto value = [&](const std::optional<double>& want, const std::optional<double>& got, const char* what) {
      if (!want) return;
      o.check(got.has_value(), nf.name + " missing " + what);
      if (!got) return;
      worst = std::max(worst, rel_err(*got, *want));
      o.check(rel_err(*got, *want) <= kDiagnosticRelTol, nf.name + " " + what + " = " + fmt(*got) + ", want " + fmt(*want));
    };
    value(nf.hess_det, d.hess_det, "hess_det");
    value(nf.leading_b, d.leading_b, "leading_b");
    value(nf.a_value, d.a_value, "a");
  }
  o.summary = std::to_string(forms.size()) + " normal forms, max relative error " + fmt(worst);
  return o;
}

Outcome ab_identity() {
  Outcome o;
  std::ostringstream s;
  for (int k = 2; k <= 4; ++k) {
    const Classification c = classify_germ(parse_frontal(battery::cuspidal_form(k, 1)).jets(kDefaultOrder));
    const double want = 6.0 * battery::factorial(6) * battery::factorial(k);
    const std::optional<double> ab = c.diagnostics.ab_product;
    o.check(ab.has_value(), "k = " + std::to_string(k) + ": no ab");
    if (!ab) continue;
    o.check(rel_err(*ab, want) <= kDiagnosticRelTol, "k = " + std::to_string(k) + ": ab = " + fmt(*ab));
    if (k % 2 == 0) o.check(*ab > 0, "k = " + std::to_string(k) + ": sign of ab");
    s << (k > 2 ? ", " : "") << "k=" << k << " ab=" << fmt(*ab, 12);
  }
  o.summary = s.str();
  return o;
}

Outcome invariance_fuzz() {
  Outcome o;
  fuzz::Rng rng(1001);
  int total = 0;
  for (const battery::NormalForm& nf : battery::all()) {
    FrontalGerm g = parse_frontal(nf.map).jets(kDefaultOrder);
    if (nf.frontal) g = fuzz::explicit_normal(g);
    for (int trial = 0; trial < kInvarianceTrials; ++trial) {
      const FrontalGerm h = random_equivalent(rng, g);
      const Classification c = classify_germ(h);
      o.check(c.label() == nf.label, nf.name + " trial " + std::to_string(trial) + " -> " + c.label());
      ++total;
      if (nf.frontal) {
        const Classification a = classify_germ({h.map, std::nullopt});
        o.check(a.label() == nf.label, nf.name + " (auto normal) trial " + std::to_string(trial) + " -> " + a.label());
        ++total;
      }
    }
  }
  o.summary = std::to_string(total) + " transformed germs";
  return o;
}

Outcome negative_control() {
  Outcome o;
  fuzz::Rng rng(1002);
  const FrontalGerm g = parse_frontal("(u, u*v + v^3, u*v + 2*v^3)").jets(kDefaultOrder);
  for (int trial = 0; trial <= kInvarianceTrials; ++trial) {
    const Classification c = classify_germ(trial == 0 ? g : random_equivalent(rng, g));
    o.check(c.kind != Kind::CmmPlus && c.kind != Kind::CmmMinus, "trial " + std::to_string(trial) + " -> " + c.label());
  }
  o.summary = "the control and " + std::to_string(kInvarianceTrials) + " coordinate changes, none CMM";
  return o;
}

Outcome tangent_developables() {
  Outcome o;
  const struct {
    const char* curve;
    int torsion_order;
    const char* label;
  } cases[] = {{"(t, t^2/2, t^3/6)", 0, "cuspidal_edge"}, {"(t, t^2/2, t^4/24)", 1, "cCR"}, {"(t, t^2/2, t^5)", 2, "cS1+"}};
  for (const auto& c : cases) {
    const CurveJets s = parse_curve(c.curve).jets(kDefaultOrder);
    o.check(vanishing_order(frenet(s).tau).k == c.torsion_order, std::string(c.curve) + " torsion order");
    const std::string got = classify_germ(tangent_developable(s)).label();
    o.check(got == c.label, std::string(c.curve) + " -> " + got);
  }

  fuzz::Rng rng(1005);
  double worst = 0.0;
  for (int trial = 0; trial < kCurveTrials; ++trial) {
    const int order = 12;
    CurveJets raw;
    for (int i = 0; i < 3; ++i) {
      raw[i] = Jet1(order);
      for (int j = 1; j <= 5; ++j) raw[i].set(j, fuzz::uniform(rng, -1.0, 1.0));
    }
    raw[0].set(1, raw[0].coeff(1) + 2.0);
    raw[1].set(2, raw[1].coeff(2) + 2.0);
    const CurveJets s = arclength_reparametrize(raw);
    const FrenetData fr = frenet(s);
    const FrontalGerm g = tangent_developable(s);
    const FrontalAnalysis an = analyze_frontal(g);
    if (!an.null || !an.normal || !an.gamma) {
      o.check(false, "trial " + std::to_string(trial) + ": no singular curve");
      continue;
    }
    const Jet1 psi = psi_jet(g, *an.normal, *an.gamma, *an.null);
    double scale = 1.0;
    for (int i = 0; i <= 6; ++i) scale = std::max(scale, std::fabs(fr.tau.coeff(i)));
    for (int i = 0; i <= 6; ++i) {
      const double gap = std::fabs(psi.coeff(i) + fr.tau.coeff(i)) / scale;
      worst = std::max(worst, gap);
      o.check(gap <= kTorsionRelTol, "trial " + std::to_string(trial) + " coefficient " + std::to_string(i));
    }
  }
  o.summary = "torsion orders 0/1/2 labeled, psi = -tau on " + std::to_string(kCurveTrials) +
              " curves through order 6, max gap " + fmt(worst);
  return o;
}

Outcome fold_suite() {
  Outcome o;
  const FoldSpec fold = parse_fold("(x, y, z^2)", "z");
  auto both = [&](const std::string& map) {
    const FrontalGerm g = parse_frontal(map).jets(12);
    return std::pair{predict_fold_class(g, fold), classify_germ({fold_compose(g, fold).composed, std::nullopt})};
  };

  // The same cuspidal edge on the two sides of the fold's critical plane.
  const auto plus = both("(u, v^2, u^2 + v^2 + v^3)");
  const auto minus = both("(u, v^2, -u^2 + v^2 + v^3)");
  o.check(plus.first.label() == "cS1+" && plus.second.label() == "cS1+", "same side -> " + plus.second.label());
  o.check(minus.first.label() == "cS1-" && minus.second.label() == "cS1-", "opposite side -> " + minus.second.label());

  fuzz::Rng rng(1006);
  int agree = 0;
  for (int trial = 0; trial < kFoldInstances; ++trial) {
    const int k = 1 + trial % 5;
    const double lead = fuzz::signed_scale(rng, 0.5, 2.0);
    std::string a3 = num(lead) + "*u^" + std::to_string(k);
    for (int j = k + 1; j <= k + 2; ++j) a3 += " + " + num(fuzz::uniform(rng, -1.0, 1.0)) + "*u^" + std::to_string(j);
    const double b00 = fuzz::signed_scale(rng, 0.5, 2.0);
    const std::string b3 = num(b00) + " + " + num(fuzz::signed_scale(rng, 0.5, 2.0)) + "*v + " +
                           num(fuzz::uniform(rng, -1.0, 1.0)) + "*u + " + num(fuzz::uniform(rng, -1.0, 1.0)) + "*u*v";
    const auto [p, d] = both("(u, v^2, " + a3 + " + v^2*(" + b3 + "))");
    std::string want = k == 1 ? "cCR" : "cS" + std::to_string(k - 1);
    if (k > 1 && k % 2 == 0) want += lead * b00 > 0 ? "+" : "-";
    const bool ok = p.label() == d.label() && p.label() == want;
    agree += ok ? 1 : 0;
    o.check(ok, "k = " + std::to_string(k) + ": predicted " + p.label() + ", direct " + d.label() + ", want " + want);
  }
  o.summary = std::to_string(agree) + "/" + std::to_string(kFoldInstances) +
              " random instances agree; same side cS1+, opposite side cS1-";
  return o;
}

Outcome jet_kernel() {
  Outcome o;
  const int n = 8;
  const Jet1 t = Jet1::variable(n);
  auto fact = battery::factorial;
  double worst_compose = 0.0, worst_roundtrip = 0.0;
  auto compose_check = [&](const Jet1& got, const std::vector<double>& want, const char* what) {
    const double gap = series_gap(got, want);
    worst_compose = std::max(worst_compose, gap);
    o.check(gap <= kCompositionRelTol, std::string(what) + " gap " + fmt(gap));
  };

  std::vector<double> arcsin_c(n + 1, 0.0), root(n + 1, 0.0), log_c(n + 1, 0.0), cos_c(n + 1, 0.0), y(n + 1, 0.0);
  for (int k = 0; 2 * k + 1 <= n; ++k)
    arcsin_c[static_cast<std::size_t>(2 * k + 1)] = fact(2 * k) / (std::pow(4.0, k) * fact(k) * fact(k) * (2 * k + 1));
  double binom = 1.0;
  for (int k = 0; 2 * k <= n; ++k) {
    root[static_cast<std::size_t>(2 * k)] = binom * (k % 2 ? -1.0 : 1.0);
    binom *= (0.5 - k) / (k + 1);
  }
  for (int k = 1; k <= n; ++k) log_c[static_cast<std::size_t>(k)] = (k % 2 ? 1.0 : -1.0) / k;
  for (int k = 0; k <= n; k += 2) cos_c[static_cast<std::size_t>(k)] = ((k / 2) % 2 ? -1.0 : 1.0) / fact(k);
  y[0] = 1.0;
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += cos_c[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k - j)];
    y[static_cast<std::size_t>(k + 1)] = acc / (k + 1);
  }
  const Jet1 arcsin = Jet1::from_coeffs(arcsin_c);
  compose_check(compose(sin(t), arcsin), {0, 1, 0, 0, 0, 0, 0, 0, 0}, "sin(arcsin t)");
  compose_check(compose(cos(t), arcsin), root, "cos(arcsin t)");
  compose_check(compose(exp(t), Jet1::from_coeffs(log_c)), {1, 1, 0, 0, 0, 0, 0, 0, 0}, "exp(log(1+t))");
  compose_check(compose(exp(t), sin(t)), y, "exp(sin t)");
  compose_check(sin(t) / cos(t), {0, 1, 0, 1.0 / 3, 0, 2.0 / 15, 0, 17.0 / 315, 0}, "tan t");

  std::mt19937_64 rng(1007);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto random_jet = [&](int order, double constant) {
    Jet2 j(order, constant);
    Jet2::for_each_index(order, [&](const Jet2::MultiIndex& idx) {
      if (idx[0] + idx[1] > 0) j.set(idx, d(rng));
    });
    return j;
  };
  auto roundtrip = [&](double gap, const char* what) {
    worst_roundtrip = std::max(worst_roundtrip, gap);
    o.check(gap <= kRoundtripRelTol, std::string(what) + " gap " + fmt(gap));
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int order = 1 + trial % 9;
    const Jet2 a = random_jet(order, 0.9), b = random_jet(order, 1.5), p = random_jet(order, 2.0);
    roundtrip(jet_gap((a * b) / b, a), "(a b) / b");
    roundtrip(jet_gap(sqrt(p) * sqrt(p), p), "sqrt(p)^2");
    roundtrip(jet_gap(exp(a) * exp(-a), Jet2(order, 1.0)), "exp(a) exp(-a)");
    roundtrip(jet_gap(sin(a) * sin(a) + cos(a) * cos(a), Jet2(order, 1.0)), "sin^2 + cos^2");
  }
  const Jet1 f = sin(t) + 0.3 * t * t;
  roundtrip(jet_gap(compose(f, revert(f)), t), "f(f^-1(t))");
  roundtrip(jet_gap(revert(revert(f)), f), "revert twice");
  o.summary = "composition max gap " + fmt(worst_compose) + ", roundtrip max gap " + fmt(worst_roundtrip);
  return o;
}

Outcome cusp25_suite() {
  Outcome o;
  auto label = [](const CurveJets& c) { return classify_curve_cusp25(c).label(); };
  auto jets = [](const char* text) { return parse_curve(text).jets(kDefaultOrder); };
  o.check(label(jets("(t^2, t^5, 0)")) == "cusp25", "(t^2, t^5, 0)");
  o.check(label(jets("(t^2, t^4 + t^5, 0)")) == "cusp25", "(t^2, t^4 + t^5, 0)");
  o.check(label(jets("(t^2, t^4, 0)")) == "not_cusp25", "(t^2, t^4, 0)");

  fuzz::Rng rng(1008);
  const CurveJets cusp = jets("(t^2, t^5, 0)");
  const CurveJets ordinary = jets("(t^2, t^3, 0)");
  const CurveJets tacnode = jets("(t^2, t^4, 0)");
  o.check(label(ordinary) != "cusp25", "(t^2, t^3, 0)");
  for (int trial = 0; trial < kCurveTrials; ++trial) {
    const fuzz::TargetChange phi = fuzz::random_target(rng);
    o.check(label(phi.apply(cusp)) == "cusp25", "image " + std::to_string(trial) + " of (t^2, t^5, 0)");
    o.check(label(phi.apply(ordinary)) != "cusp25", "image " + std::to_string(trial) + " of (t^2, t^3, 0)");
    o.check(label(phi.apply(tacnode)) != "cusp25", "image " + std::to_string(trial) + " of (t^2, t^4, 0)");
  }
  o.summary = "3 examples, " + std::to_string(kCurveTrials) + " images each of the cusp and both controls";
  return o;
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    std::function<Outcome()> run;
  } criteria[] = {{1, "normal-form battery", normal_form_battery},
                  {2, "ab identity", ab_identity},
                  {3, "invariance fuzz", invariance_fuzz},
                  {4, "negative control", negative_control},
                  {5, "tangent developables", tangent_developables},
                  {6, "fold composition", fold_suite},
                  {7, "jet kernel soundness", jet_kernel},
                  {8, "(2,5)-cusp suite", cusp25_suite}};
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str());
    for (const std::string& f : o.failures) std::printf("    %s\n", f.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
