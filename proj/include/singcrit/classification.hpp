#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singcrit/linalg.hpp"

namespace singcrit {

enum class Kind {
  Regular,
  CrossCap,
  CmmPlus,
  CmmMinus,
  CuspidalEdge,
  CuspidalCrossCap,
  CuspidalSk,
  Cusp25,
  NotCusp25,
  Unrecognized,
};

/// Numbers gathered along the way; a field is empty when its stage did not run.
struct Diagnostics {
  std::optional<int> corank;
  std::optional<Vec2> phi_gradient;
  std::optional<double> hess_det;
  std::optional<bool> indep_test;
  std::optional<std::vector<double>> psi_coefficients;
  std::optional<int> order_k;
  std::optional<double> leading_b;
  std::optional<double> ell;
  std::optional<double> a_value;
  std::optional<double> ab_product;
  // Frontal criteria (a)-(d) and fold conditions (A)-(C).
  std::optional<bool> cond_a;
  std::optional<bool> cond_b;
  std::optional<bool> cond_c;
  std::optional<bool> cond_d;
  std::optional<bool> fold_a;
  std::optional<bool> fold_b;
  std::optional<int> fold_c;
};

struct Classification {
  Kind kind = Kind::Unrecognized;
  int index = 0;  // k of a cuspidal S_k singularity
  int sign = 0;   // +1 / -1, or 0 when the sign carries no information
  std::vector<std::string> reasons;
  Diagnostics diagnostics;

  bool definite() const noexcept { return kind != Kind::Unrecognized; }

  /// Stable machine-readable tag.
  std::string label() const {
    switch (kind) {
      case Kind::Regular: return "regular";
      case Kind::CrossCap: return "cross_cap";
      case Kind::CmmPlus: return "S1+";
      case Kind::CmmMinus: return "S1-";
      case Kind::CuspidalEdge: return "cuspidal_edge";
      case Kind::CuspidalCrossCap: return "cCR";
      case Kind::CuspidalSk: {
        std::string tag = "cS" + std::to_string(index);
        if (sign > 0) tag += '+';
        if (sign < 0) tag += '-';
        return tag;
      }
      case Kind::Cusp25: return "cusp25";
      case Kind::NotCusp25: return "not_cusp25";
      case Kind::Unrecognized: return "unrecognized";
    }
    return "unrecognized";
  }

  static Classification unrecognized(std::string reason, Diagnostics diag = {}) {
    Classification c;
    c.kind = Kind::Unrecognized;
    c.reasons.push_back(std::move(reason));
    c.diagnostics = std::move(diag);
    return c;
  }
};

}  // namespace singcrit
