#pragma once

// JSON and text renderings of classification results. The JSON form is
// canonical: keys sorted, doubles printed with 17 significant digits, so that
// identical inputs give byte-identical output.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "singcrit/classification.hpp"
#include "singcrit/tolerance.hpp"

namespace singcrit {

using Json = nlohmann::json;

/// What the user asked for, echoed back in every report.
struct ReportInput {
  std::string map;
  std::string normal = "auto";
  Vec2 point{0.0, 0.0};
  int order = kDefaultOrder;
  int max_k = kDefaultMaxK;
  Tolerance tol{};
};

inline Json diagnostics_json(const Diagnostics& d) {
  Json j = Json::object();
  if (d.phi_gradient) j["phi_gradient"] = {(*d.phi_gradient)[0], (*d.phi_gradient)[1]};
  if (d.hess_det) j["hess_det"] = *d.hess_det;
  if (d.indep_test) j["indep_test"] = *d.indep_test;
  if (d.psi_coefficients) j["psi_coefficients"] = *d.psi_coefficients;
  if (d.order_k) j["order_k"] = *d.order_k;
  if (d.leading_b) j["leading_b"] = *d.leading_b;
  if (d.ell) j["ell"] = *d.ell;
  if (d.a_value) j["a_value"] = *d.a_value;
  if (d.ab_product) j["ab_product"] = *d.ab_product;

  Json flags = Json::object();
  if (d.cond_a) flags["a"] = *d.cond_a;
  if (d.cond_b) flags["b"] = *d.cond_b;
  if (d.cond_c) flags["c"] = *d.cond_c;
  if (d.cond_d) flags["d"] = *d.cond_d;
  if (d.fold_a) flags["A"] = *d.fold_a;
  if (d.fold_b) flags["B"] = *d.fold_b;
  if (d.fold_c) flags["C"] = *d.fold_c;
  if (!flags.empty()) j["condition_flags"] = flags;
  return j;
}

inline Json classification_json(const Classification& c) {
  Json j = Json::object();
  j["classification"] = c.label();
  j["corank"] = c.diagnostics.corank ? Json(*c.diagnostics.corank) : Json(nullptr);
  if (c.kind == Kind::CuspidalSk) {
    j["k"] = c.index;
    j["sign"] = c.sign > 0 ? Json("+") : c.sign < 0 ? Json("-") : Json(nullptr);
  }
  j["reasons"] = c.reasons;
  j["diagnostics"] = diagnostics_json(c.diagnostics);
  return j;
}

inline Json tolerance_json(const Tolerance& tol) { return {{"abs", tol.abs}, {"rel", tol.rel}}; }

inline Json make_report(const ReportInput& in, const Classification& c, std::optional<double> timing_ms = std::nullopt) {
  Json j = classification_json(c);
  j["input"] = {{"map", in.map},       {"normal", in.normal}, {"point", {in.point[0], in.point[1]}},
                {"order", in.order},   {"max_k", in.max_k}};
  j["tolerance"] = tolerance_json(in.tol);
  if (timing_ms) j["timing_ms"] = *timing_ms;
  return j;
}

namespace detail {

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(j[i], indent, depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); return;
    default: out += j.dump(); return;
  }
}

}  // namespace detail

/// Deterministic pretty-printed JSON (two-space indent, trailing newline).
inline std::string canonical_dump(const Json& j) {
  std::string out;
  detail::dump_into(j, 2, 0, out);
  out += '\n';
  return out;
}

/// One `key: value` line per scalar leaf, nested keys joined with dots.
inline std::string text_summary(const Json& j, const std::string& prefix = "") {
  std::string out;
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      out += text_summary(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    return out;
  }
  std::string value;
  if (j.is_array()) {
    value = "[";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) value += ", ";
      value += j[i].is_number_float() ? detail::format_double(j[i].get<double>())
               : j[i].is_string()     ? j[i].get<std::string>()
                                      : j[i].dump();
    }
    value += "]";
  } else if (j.is_string()) {
    value = j.get<std::string>();
  } else if (j.is_number_float()) {
    value = detail::format_double(j.get<double>());
  } else {
    value = j.dump();
  }
  return prefix + ": " + value + "\n";
}

}  // namespace singcrit
