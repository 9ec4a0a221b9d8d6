#pragma once

// Command-line front end. `run_cli` takes the arguments after the program
// name and writes to the given streams, so it can be driven in-process.
//
// Exit codes: 0 definite classification (including regular points),
// 1 usage or evaluation error, 2 unrecognized germ.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "singcrit/apps.hpp"
#include "singcrit/classify.hpp"
#include "singcrit/mesh.hpp"
#include "singcrit/report.hpp"

namespace singcrit {

namespace detail {

inline std::vector<double> parse_numbers(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    const double x = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end == piece.c_str() || std::string_view(end).find_first_not_of(" \t") != std::string_view::npos ||
        !std::isfinite(x))
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": '" + piece + "' is not a finite number");
    values.push_back(x);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (values.size() != count)
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": expected " + std::to_string(count) + " comma-separated numbers");
  return values;
}

inline Vec2 parse_pair(const std::string& text, const char* what) {
  const auto v = parse_numbers(text, 2, what);
  return {v[0], v[1]};
}

/// "N" or "NxM" (u points by v points).
inline std::array<int, 2> parse_resolution(const std::string& text) {
  const std::size_t x = text.find_first_of("xX");
  auto one = [&](const std::string& s) {
    char* end = nullptr;
    const long n = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || n < 2 || n > 100000)
      throw Error(ErrorCode::InvalidArgument, "--res: '" + s + "' is not an integer >= 2");
    return static_cast<int>(n);
  };
  if (x == std::string::npos) {
    const int n = one(text);
    return {n, n};
  }
  return {one(text.substr(0, x)), one(text.substr(x + 1))};
}

struct CommonFlags {
  int order = kDefaultOrder;
  int max_k = kDefaultMaxK;
  double tol_abs = kDefaultTolerance.abs;
  double tol_rel = kDefaultTolerance.rel;
  bool json = false;

  void attach(CLI::App* app) {
    app->add_option("--order", order, "Truncation order of the jets")->check(CLI::Range(5, 40));
    app->add_option("--max-k", max_k, "Largest psi vanishing order that is classified")->check(CLI::Range(0, 30));
    app->add_option("--tol-abs", tol_abs, "Absolute zero tolerance")->check(CLI::NonNegativeNumber);
    app->add_option("--tol-rel", tol_rel, "Relative zero tolerance")->check(CLI::NonNegativeNumber);
    app->add_flag("--json", json, "Emit canonical JSON");
  }

  FrontalOptions frontal() const {
    FrontalOptions o;
    o.max_k = max_k;
    o.tol = {tol_abs, tol_rel};
    return o;
  }

  void emit(const Json& j, std::ostream& out) const { out << (json ? canonical_dump(j) : text_summary(j)); }
};

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recognition of singularities of surfaces in 3-space from their Taylor jets", "singcrit"};
  app.require_subcommand(1);

  // classify
  auto* classify = app.add_subcommand("classify", "Classify the germ of a map (u, v) -> R^3 at a point");
  std::string map_text;
  std::string normal_text = "auto";
  std::string point_text = "0,0";
  bool timing = false;
  detail::CommonFlags classify_flags;
  classify->add_option("--map", map_text, "Map as \"(f1, f2, f3)\" in u, v")->required();
  classify->add_option("--normal", normal_text, "Unit normal field \"(n1, n2, n3)\" in u, v, or auto");
  classify->add_option("--point", point_text, "Base point u,v");
  classify->add_flag("--timing", timing, "Include wall-clock time in the report");
  classify_flags.attach(classify);

  // suite
  auto* suite = app.add_subcommand("suite", "Worked applications");
  suite->require_subcommand(1);

  auto* tangent = suite->add_subcommand("tangent-dev", "Tangent developable surface of a space curve");
  std::string curve_text;
  detail::CommonFlags tangent_flags;
  tangent->add_option("--curve", curve_text, "Curve as \"(x, y, z)\" in t")->required();
  tangent_flags.attach(tangent);

  auto* fold = suite->add_subcommand("fold", "Composition of a cuspidal edge with a fold map");
  std::string fold_map, fold_normal = "auto", fold_text, surface_text, kernel_text;
  detail::CommonFlags fold_flags;
  fold->add_option("--map", fold_map, "Cuspidal edge \"(f1, f2, f3)\" in u, v")->required();
  fold->add_option("--normal", fold_normal, "Normal field of the map, or auto");
  fold->add_option("--fold", fold_text, "Fold map \"(F1, F2, F3)\" in x, y, z")->required();
  fold->add_option("--surface", surface_text, "Critical surface h(x, y, z) of the fold")->required();
  fold->add_option("--kernel", kernel_text, "Kernel direction of dF as x,y,z (computed when omitted)");
  fold_flags.attach(fold);

  auto* curve25 = suite->add_subcommand("curve25", "(2,5)-cusp test for a space curve");
  std::string curve25_text;
  detail::CommonFlags curve25_flags;
  curve25->add_option("--curve", curve25_text, "Curve as \"(x, y, z)\" in t")->required();
  curve25_flags.attach(curve25);

  // mesh
  auto* mesh = app.add_subcommand("mesh", "Sample a surface on a grid and write a Wavefront OBJ file");
  std::string mesh_map, u_range = "-1,1", v_range = "-1,1", res_text = "32", out_path;
  mesh->add_option("--map", mesh_map, "Map as \"(f1, f2, f3)\" in u, v")->required();
  mesh->add_option("--u-range", u_range, "Parameter range u0,u1");
  mesh->add_option("--v-range", v_range, "Parameter range v0,v1");
  mesh->add_option("--res", res_text, "Grid points per axis, N or NxM");
  mesh->add_option("--out", out_path, "Output path, or - for standard output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (classify->parsed()) {
      const detail::CommonFlags& fl = classify_flags;
      const FrontalSpec spec = parse_frontal(map_text, normal_text, detail::parse_pair(point_text, "--point"));
      const FrontalGerm g = spec.jets(fl.order);
      const auto start = std::chrono::steady_clock::now();
      const Classification c = classify_germ(g, fl.frontal());
      const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

      ReportInput in;
      in.map = spec.map.to_string();
      if (spec.normal) in.normal = MapGerm{*spec.normal, spec.map.base_point}.to_string();
      in.point = spec.map.base_point;
      in.order = fl.order;
      in.max_k = fl.max_k;
      in.tol = fl.frontal().tol;
      fl.emit(make_report(in, c, timing ? std::optional<double>(ms) : std::nullopt), out);
      return c.definite() ? 0 : 2;
    }

    if (tangent->parsed()) {
      const detail::CommonFlags& fl = tangent_flags;
      const FrontalOptions opts = fl.frontal();
      const CurveGerm curve = parse_curve(curve_text);
      const CurveJets sigma = curve.jets(fl.order);
      const FrenetData fr = frenet(sigma, opts.tol);
      const Classification c = classify_germ(tangent_developable(sigma, opts.tol), opts);

      Json j = Json::object();
      j["suite"] = "tangent-dev";
      j["input"] = {{"curve", curve.to_string()}, {"order", fl.order}};
      j["curvature"] = fr.kappa.constant_term();
      std::vector<double> torsion;
      for (int i = 0; i <= std::min(fr.tau.order(), 6); ++i) torsion.push_back(fr.tau.extract({i}));
      j["torsion_derivatives"] = torsion;
      std::optional<int> torsion_order;
      try {
        torsion_order = vanishing_order(fr.tau, opts.tol).k;
      } catch (const Error&) {
      }
      j["torsion_order"] = torsion_order ? Json(*torsion_order) : Json(nullptr);
      Json expected = nullptr;
      if (torsion_order && *torsion_order == 0) expected = "cuspidal_edge";
      if (torsion_order && *torsion_order == 1) expected = "cCR";
      if (torsion_order && *torsion_order == 2) expected = "cS1+";
      j["expected"] = expected;
      j["agree"] = expected.is_null() ? Json(nullptr) : Json(expected.get<std::string>() == c.label());
      j["report"] = classification_json(c);
      j["tolerance"] = tolerance_json(opts.tol);
      fl.emit(j, out);
      return c.definite() ? 0 : 2;
    }

    if (fold->parsed()) {
      const detail::CommonFlags& fl = fold_flags;
      const FrontalOptions opts = fl.frontal();
      const FrontalSpec spec = parse_frontal(fold_map, fold_normal);
      const FrontalGerm g = spec.jets(fl.order);
      std::optional<Vec3> kernel;
      if (!kernel_text.empty()) {
        const auto k = detail::parse_numbers(kernel_text, 3, "--kernel");
        kernel = Vec3{k[0], k[1], k[2]};
      }
      const FoldSpec fs = parse_fold(fold_text, surface_text, constant_terms(g.map), kernel, opts.tol);
      const FoldComposition comp = fold_compose(g, fs, opts.tol);
      const Classification direct = classify_germ({comp.composed, std::nullopt}, opts);

      Json j = Json::object();
      j["suite"] = "fold";
      j["input"] = {{"map", spec.map.to_string()},
                    {"normal", spec.normal ? MapGerm{*spec.normal, {}}.to_string() : std::string("auto")},
                    {"fold", to_string(std::vector<Expr>(fs.map.begin(), fs.map.end()))},
                    {"surface", fs.surface.to_string()},
                    {"kernel", {fs.kernel_dir[0], fs.kernel_dir[1], fs.kernel_dir[2]}},
                    {"order", fl.order}};
      j["checks"] = {{"A", comp.checks.a}, {"B", comp.checks.b}};
      Json predicted = nullptr;
      try {
        const Classification p = predict_fold_class(g, fs, opts);
        predicted = p.label();
        j["checks"]["C"] = *p.diagnostics.fold_c;
      } catch (const Error& e) {
        j["prediction_note"] = e.what();
      }
      j["predicted"] = predicted;
      j["direct"] = classification_json(direct);
      j["agree"] = predicted.is_null() ? Json(nullptr) : Json(predicted.get<std::string>() == direct.label());
      j["tolerance"] = tolerance_json(opts.tol);
      fl.emit(j, out);
      return direct.definite() ? 0 : 2;
    }

    if (curve25->parsed()) {
      const detail::CommonFlags& fl = curve25_flags;
      const CurveGerm curve = parse_curve(curve25_text);
      const Tolerance tol = fl.frontal().tol;
      const Classification c = classify_curve_cusp25(curve.jets(fl.order), tol);
      Json j = Json::object();
      j["suite"] = "curve25";
      j["input"] = {{"curve", curve.to_string()}, {"order", fl.order}};
      j["classification"] = c.label();
      j["reasons"] = c.reasons;
      j["ell"] = c.diagnostics.ell ? Json(*c.diagnostics.ell) : Json(nullptr);
      j["tolerance"] = tolerance_json(tol);
      fl.emit(j, out);
      return c.definite() ? 0 : 2;
    }

    if (mesh->parsed()) {
      MeshSpec ms;
      ms.u_range = detail::parse_pair(u_range, "--u-range");
      ms.v_range = detail::parse_pair(v_range, "--v-range");
      const auto res = detail::parse_resolution(res_text);
      ms.u_res = res[0];
      ms.v_res = res[1];
      const Mesh m = sample(parse_map(mesh_map), ms);
      if (out_path == "-") {
        write_obj(m, out);
      } else {
        std::ofstream file(out_path);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open '" + out_path + "' for writing");
        write_obj(m, file);
        file.close();
        if (!file) throw Error(ErrorCode::InvalidArgument, "failed writing '" + out_path + "'");
        out << "wrote " << m.vertices.size() << " vertices and " << m.face_count() << " faces to " << out_path << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace singcrit
