#pragma once

// Truncated Taylor expansions in one or two variables.
//
// A Jet<1> of order N is a0 + a1 t + ... + aN t^N + O(t^(N+1)); a Jet<2> of
// order N stores a_ij for i + j <= N in graded order.  Every operation returns
// the exact truncated expansion of the composite function; no numerical
// differentiation happens anywhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singcrit/error.hpp"
#include "singcrit/tolerance.hpp"

namespace singcrit {

template <int Vars>
class Jet {
  static_assert(Vars == 1 || Vars == 2, "jets are univariate or bivariate");

 public:
  using MultiIndex = std::array<int, Vars>;

  static constexpr int variables = Vars;

  Jet() : Jet(0) {}

  explicit Jet(int order, double constant = 0.0) : order_(order), coeffs_(size_for(order), 0.0) {
    if (order < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation order");
    coeffs_[0] = constant;
  }

  /// Univariate jet from its coefficient list a0..aN.
  static Jet from_coeffs(std::vector<double> coeffs) requires(Vars == 1) {
    if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
    Jet j(static_cast<int>(coeffs.size()) - 1);
    j.coeffs_ = std::move(coeffs);
    j.check_finite();
    return j;
  }

  static Jet constant(int order, double c) { return Jet(order, c); }

  /// The coordinate function `at + x_which`.
  static Jet variable(int order, int which = 0, double at = 0.0) {
    Jet j(order, at);
    if (order >= 1) {
      MultiIndex idx{};
      idx[static_cast<std::size_t>(which)] = 1;
      j.coeffs_[index(idx)] = 1.0;
    }
    return j;
  }

  int order() const noexcept { return order_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double constant_term() const noexcept { return coeffs_[0]; }

  double coeff(int i) const requires(Vars == 1) { return coeff(MultiIndex{i}); }
  double coeff(int i, int j) const requires(Vars == 2) { return coeff(MultiIndex{i, j}); }
  double coeff(const MultiIndex& idx) const {
    if (degree(idx) > order_) return 0.0;
    return coeffs_[index(idx)];
  }

  void set(const MultiIndex& idx, double value) {
    if (degree(idx) > order_)
      throw Error(ErrorCode::OrderExceedsTruncation, "coefficient beyond truncation order");
    coeffs_[index(idx)] = value;
  }
  void set(int i, double value) requires(Vars == 1) { set(MultiIndex{i}, value); }
  void set(int i, int j, double value) requires(Vars == 2) { set(MultiIndex{i, j}, value); }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::fabs(c));
    return m;
  }

  /// Derivative value at the base point: coefficient times the factorials of
  /// the multi-index.
  double extract(const MultiIndex& idx) const {
    if (degree(idx) > order_)
      throw Error(ErrorCode::OrderExceedsTruncation,
                  "derivative of order " + std::to_string(degree(idx)) + " requested from a jet of order " +
                      std::to_string(order_));
    double scale = 1.0;
    for (int k : idx) scale *= factorial(k);
    return coeffs_[index(idx)] * scale;
  }

  Jet truncated(int new_order) const {
    if (new_order > order_) throw Error(ErrorCode::OrderMismatch, "cannot raise the truncation order");
    Jet r(new_order);
    std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
    return r;
  }

  /// Partial derivative; the result has order N - 1.
  Jet derivative(int var = 0) const {
    if (order_ == 0) throw Error(ErrorCode::OrderExceedsTruncation, "derivative of an order-0 jet");
    Jet r(order_ - 1);
    for_each_index(order_ - 1, [&](const MultiIndex& idx) {
      MultiIndex up = idx;
      up[static_cast<std::size_t>(var)] += 1;
      r.coeffs_[index(idx)] = coeffs_[index(up)] * up[static_cast<std::size_t>(var)];
    });
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (double& c : r.coeffs_) c = -c;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    require_same_order(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Jet& operator+=(double s) {
    coeffs_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) {
    if (s == 0.0) throw Error(ErrorCode::DivisionBySingular, "division by a zero scalar");
    return a *= 1.0 / s;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_same_order(b);
    Jet r(a.order_);
    if constexpr (Vars == 1) {
      for (int i = 0; i <= a.order_; ++i) {
        if (a.coeffs_[i] == 0.0) continue;
        for (int j = 0; i + j <= a.order_; ++j) r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    } else {
      const int n = a.order_;
      for (int i1 = 0; i1 <= n; ++i1)
        for (int j1 = 0; i1 + j1 <= n; ++j1) {
          const double x = a.coeffs_[index({i1, j1})];
          if (x == 0.0) continue;
          for (int i2 = 0; i1 + j1 + i2 <= n; ++i2)
            for (int j2 = 0; i1 + j1 + i2 + j2 <= n; ++j2)
              r.coeffs_[index({i1 + i2, j1 + j2})] += x * b.coeffs_[index({i2, j2})];
        }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    a.require_same_order(b);
    const double b0 = b.coeffs_[0];
    if (kDefaultTolerance.is_zero(b0, b.max_abs()))
      throw Error(ErrorCode::DivisionBySingular, "denominator vanishes at the base point");
    Jet r(a.order_);
    for_each_index(a.order_, [&](const MultiIndex& alpha) {
      double acc = a.coeffs_[index(alpha)];
      for_each_sub_index(alpha, [&](const MultiIndex& beta) {
        if (beta == alpha) return;
        acc -= r.coeffs_[index(beta)] * b.coeffs_[index(difference(alpha, beta))];
      });
      r.coeffs_[index(alpha)] = acc / b0;
    });
    return r;
  }

  friend Jet operator/(double s, const Jet& b) { return Jet(b.order_, s) / b; }

  friend bool operator==(const Jet&, const Jet&) = default;

  // Graded layout: total degree d occupies [d(d+1)/2, (d+1)(d+2)/2).
  static std::size_t index(const MultiIndex& idx) noexcept {
    if constexpr (Vars == 1) {
      return static_cast<std::size_t>(idx[0]);
    } else {
      const int d = idx[0] + idx[1];
      return static_cast<std::size_t>(d * (d + 1) / 2 + idx[1]);
    }
  }

  static int degree(const MultiIndex& idx) noexcept {
    int d = 0;
    for (int k : idx) d += k;
    return d;
  }

  /// Visits every multi-index of total degree <= order in graded order.
  template <class F>
  static void for_each_index(int order, F&& f) {
    if constexpr (Vars == 1) {
      for (int i = 0; i <= order; ++i) f(MultiIndex{i});
    } else {
      for (int d = 0; d <= order; ++d)
        for (int j = 0; j <= d; ++j) f(MultiIndex{d - j, j});
    }
  }

 private:
  static std::size_t size_for(int order) {
    if (order < 0) return 1;
    if constexpr (Vars == 1) {
      return static_cast<std::size_t>(order) + 1;
    } else {
      return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
    }
  }

  static double factorial(int k) noexcept {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
  }

  static MultiIndex difference(const MultiIndex& a, const MultiIndex& b) noexcept {
    MultiIndex r{};
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
    return r;
  }

  // Every beta <= alpha componentwise.
  template <class F>
  static void for_each_sub_index(const MultiIndex& alpha, F&& f) {
    if constexpr (Vars == 1) {
      for (int i = 0; i <= alpha[0]; ++i) f(MultiIndex{i});
    } else {
      for (int i = 0; i <= alpha[0]; ++i)
        for (int j = 0; j <= alpha[1]; ++j) f(MultiIndex{i, j});
    }
  }

  void require_same_order(const Jet& o) const {
    if (order_ != o.order_)
      throw Error(ErrorCode::OrderMismatch,
                  "operands have orders " + std::to_string(order_) + " and " + std::to_string(o.order_));
  }

  void check_finite() const {
    for (double c : coeffs_)
      if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite jet coefficient");
  }

  template <int V>
  friend Jet<V> sqrt(const Jet<V>& a);

  int order_;
  std::vector<double> coeffs_;
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

template <int V>
Jet<V> sqrt(const Jet<V>& a) {
  const double a0 = a.constant_term();
  if (!(a0 > 0.0) || kDefaultTolerance.is_zero(a0, a.max_abs()))
    throw Error(ErrorCode::SqrtOfNonpositive, "square root needs a positive constant term");
  using MI = typename Jet<V>::MultiIndex;
  Jet<V> r(a.order(), std::sqrt(a0));
  const double twice_root = 2.0 * r.constant_term();
  Jet<V>::for_each_index(a.order(), [&](const MI& alpha) {
    if (Jet<V>::degree(alpha) == 0) return;
    double acc = a.coeffs_[Jet<V>::index(alpha)];
    Jet<V>::for_each_sub_index(alpha, [&](const MI& beta) {
      if (Jet<V>::degree(beta) == 0 || beta == alpha) return;
      acc -= r.coeffs_[Jet<V>::index(beta)] * r.coeffs_[Jet<V>::index(Jet<V>::difference(alpha, beta))];
    });
    r.coeffs_[Jet<V>::index(alpha)] = acc / twice_root;
  });
  return r;
}

namespace detail {

// Nilpotent part a - a(0): its (N+1)-th power vanishes at truncation, so the
// power series of exp/sin/cos around a(0) terminate exactly.
template <int V>
Jet<V> nilpotent_part(const Jet<V>& a) {
  return a - a.constant_term();
}

}  // namespace detail

template <int V>
Jet<V> exp(const Jet<V>& a) {
  const Jet<V> x = detail::nilpotent_part(a);
  Jet<V> sum(a.order(), 1.0);
  Jet<V> term(a.order(), 1.0);
  for (int k = 1; k <= a.order(); ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  return sum * std::exp(a.constant_term());
}

namespace detail {

// Returns {cos(x), sin(x)} for nilpotent x.
template <int V>
std::array<Jet<V>, 2> cos_sin_nilpotent(const Jet<V>& x) {
  Jet<V> c(x.order(), 1.0);
  Jet<V> s(x.order(), 0.0);
  Jet<V> term(x.order(), 1.0);
  for (int k = 1; k <= x.order(); ++k) {
    term = term * x / static_cast<double>(k);
    switch (k % 4) {
      case 0: c += term; break;
      case 1: s += term; break;
      case 2: c -= term; break;
      case 3: s -= term; break;
    }
  }
  return {c, s};
}

}  // namespace detail

template <int V>
Jet<V> sin(const Jet<V>& a) {
  const auto [c, s] = detail::cos_sin_nilpotent(detail::nilpotent_part(a));
  const double a0 = a.constant_term();
  return s * std::cos(a0) + c * std::sin(a0);
}

template <int V>
Jet<V> cos(const Jet<V>& a) {
  const auto [c, s] = detail::cos_sin_nilpotent(detail::nilpotent_part(a));
  const double a0 = a.constant_term();
  return c * std::cos(a0) - s * std::sin(a0);
}

/// Integer power; negative exponents go through the reciprocal.
template <int V>
Jet<V> pow(const Jet<V>& a, int n) {
  if (n < 0) return 1.0 / pow(a, -n);
  Jet<V> result(a.order(), 1.0);
  Jet<V> base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

/// Source-plane curve through the base point: both components have zero
/// constant term.
class JetPath {
 public:
  JetPath(Jet1 u, Jet1 v) : u_(std::move(u)), v_(std::move(v)) {
    if (u_.constant_term() != 0.0 || v_.constant_term() != 0.0)
      throw Error(ErrorCode::InvalidArgument, "path must start at the base point");
  }

  const Jet1& u() const noexcept { return u_; }
  const Jet1& v() const noexcept { return v_; }
  const Jet1& operator[](std::size_t i) const noexcept { return i == 0 ? u_ : v_; }
  int order() const noexcept { return std::min(u_.order(), v_.order()); }

  /// Reverses the parameter: t -> -t.
  JetPath reversed() const {
    auto flip = [](const Jet1& j) {
      Jet1 r = j;
      for (int i = 1; i <= r.order(); i += 2) r.set(i, -r.coeff(i));
      return r;
    };
    return {flip(u_), flip(v_)};
  }

 private:
  Jet1 u_;
  Jet1 v_;
};

namespace detail {

inline void require_nilpotent(const Jet1& j) {
  if (j.constant_term() != 0.0)
    throw Error(ErrorCode::InvalidArgument, "inner jet of a composition must vanish at the base point");
}

template <int V>
void require_nilpotent(const Jet<V>& j) {
  if (j.constant_term() != 0.0)
    throw Error(ErrorCode::InvalidArgument, "inner jet of a composition must vanish at the base point");
}

}  // namespace detail

/// f(g(t)) for univariate f and g with g(0) = 0.
inline Jet1 compose(const Jet1& f, const Jet1& g) {
  detail::require_nilpotent(g);
  const int n = std::min(f.order(), g.order());
  const Jet1 inner = g.truncated(n);
  Jet1 r(n, f.coeff(n));
  for (int i = n - 1; i >= 0; --i) r = r * inner + f.coeff(i);
  return r;
}

/// Substitution of two jets (u(s), v(s)) with zero constant terms into a
/// bivariate field. Works for univariate paths and bivariate coordinate
/// changes alike.
template <int V>
Jet<V> compose(const Jet2& field, const Jet<V>& u, const Jet<V>& v) {
  detail::require_nilpotent(u);
  detail::require_nilpotent(v);
  const int n = std::min({field.order(), u.order(), v.order()});
  const Jet<V> uu = u.truncated(n);
  const Jet<V> vv = v.truncated(n);
  std::vector<Jet<V>> up{Jet<V>(n, 1.0)};
  std::vector<Jet<V>> vp{Jet<V>(n, 1.0)};
  for (int i = 1; i <= n; ++i) {
    up.push_back(up.back() * uu);
    vp.push_back(vp.back() * vv);
  }
  Jet<V> r(n);
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) {
      const double c = field.coeff(d - j, j);
      if (c == 0.0) continue;
      r += (up[static_cast<std::size_t>(d - j)] * vp[static_cast<std::size_t>(j)]) * c;
    }
  return r;
}

inline Jet1 compose(const Jet2& field, const JetPath& path) { return compose(field, path.u(), path.v()); }

/// Bivariate jet depending only on one of its two variables.
inline Jet2 lift(const Jet1& j, int var) {
  Jet2 r(j.order());
  for (int i = 0; i <= j.order(); ++i) r.set(var == 0 ? Jet2::MultiIndex{i, 0} : Jet2::MultiIndex{0, i}, j.coeff(i));
  return r;
}

/// Antiderivative vanishing at the base point; order rises by one.
inline Jet1 integrate(const Jet1& j) {
  Jet1 r(j.order() + 1);
  for (int i = 0; i <= j.order(); ++i) r.set(i + 1, j.coeff(i) / (i + 1));
  return r;
}

/// Compositional inverse g of f (f(g(s)) = s) for f(0) = 0, f'(0) != 0.
inline Jet1 revert(const Jet1& f) {
  detail::require_nilpotent(f);
  const double a1 = f.coeff(1);
  if (kDefaultTolerance.is_zero(a1, f.max_abs()))
    throw Error(ErrorCode::DivisionBySingular, "series reversion needs a nonzero linear term");
  Jet1 g = Jet1::variable(f.order()) / a1;
  for (int m = 2; m <= f.order(); ++m) {
    const double residual = compose(f, g).coeff(m);
    g.set(m, g.coeff(m) - residual / a1);
  }
  return g;
}

/// Lowest total degree carrying a coefficient that is not zero (scale = the
/// largest coefficient of the jet); order + 1 when the jet vanishes entirely.
inline int lowest_degree(const Jet2& j, const Tolerance& tol = kDefaultTolerance) {
  const double scale = j.max_abs();
  for (int d = 0; d <= j.order(); ++d)
    for (int k = 0; k <= d; ++k)
      if (!tol.is_zero(j.coeff(d - k, k), scale)) return d;
  return j.order() + 1;
}

/// Exact quotient a / b of bivariate series where b may vanish at the base
/// point. Solved degree by degree: with b_d the lowest homogeneous part of b,
/// each homogeneous part q_e of the quotient satisfies
///   q_e * b_d = a_{d+e} - sum_{j<e} q_j * b_{d+e-j},
/// an overdetermined system solved in the least-squares sense. Returns nothing
/// when some step leaves a residual, i.e. b does not divide a.
inline std::optional<Jet2> divide_exact(const Jet2& a, const Jet2& b, const Tolerance& tol = kDefaultTolerance) {
  const int n = std::min(a.order(), b.order());
  const int d = lowest_degree(b, tol);
  if (d > n) return std::nullopt;
  const double scale = std::max(a.max_abs(), b.max_abs());
  for (int deg = 0; deg < d; ++deg)
    for (int k = 0; k <= deg; ++k)
      if (!tol.is_zero(a.coeff(deg - k, k), scale)) return std::nullopt;

  const int q_order = n - d;
  Jet2 q(q_order);
  // Coefficient of u^(m-k) v^k in a homogeneous product is indexed by k.
  for (int e = 0; e <= q_order; ++e) {
    const int m = d + e;
    std::vector<double> rhs(static_cast<std::size_t>(m + 1));
    for (int k = 0; k <= m; ++k) {
      double acc = a.coeff(m - k, k);
      for (int j = 0; j < e; ++j)
        for (int kq = 0; kq <= j; ++kq) {
          const int kb = k - kq;
          const int db = m - j;
          if (kb < 0 || kb > db) continue;
          acc -= q.coeff(j - kq, kq) * b.coeff(db - kb, kb);
        }
      rhs[static_cast<std::size_t>(k)] = acc;
    }
    // Normal equations for the (m+1) x (e+1) banded system.
    const int cols = e + 1;
    std::vector<double> mat(static_cast<std::size_t>((m + 1) * cols), 0.0);
    for (int c = 0; c < cols; ++c)
      for (int kb = 0; kb <= d; ++kb) mat[static_cast<std::size_t>((c + kb) * cols + c)] = b.coeff(d - kb, kb);
    std::vector<double> normal(static_cast<std::size_t>(cols * cols), 0.0);
    std::vector<double> proj(static_cast<std::size_t>(cols), 0.0);
    for (int r = 0; r <= m; ++r)
      for (int c1 = 0; c1 < cols; ++c1) {
        const double x = mat[static_cast<std::size_t>(r * cols + c1)];
        if (x == 0.0) continue;
        proj[static_cast<std::size_t>(c1)] += x * rhs[static_cast<std::size_t>(r)];
        for (int c2 = 0; c2 < cols; ++c2)
          normal[static_cast<std::size_t>(c1 * cols + c2)] += x * mat[static_cast<std::size_t>(r * cols + c2)];
      }
    // Gaussian elimination with partial pivoting; the system is nonsingular
    // because multiplication by b_d != 0 is injective.
    std::vector<double> sol = proj;
    for (int c = 0; c < cols; ++c) {
      int piv = c;
      for (int r = c + 1; r < cols; ++r)
        if (std::fabs(normal[static_cast<std::size_t>(r * cols + c)]) >
            std::fabs(normal[static_cast<std::size_t>(piv * cols + c)]))
          piv = r;
      if (piv != c) {
        for (int k = 0; k < cols; ++k)
          std::swap(normal[static_cast<std::size_t>(c * cols + k)], normal[static_cast<std::size_t>(piv * cols + k)]);
        std::swap(sol[static_cast<std::size_t>(c)], sol[static_cast<std::size_t>(piv)]);
      }
      const double p = normal[static_cast<std::size_t>(c * cols + c)];
      if (p == 0.0) return std::nullopt;
      for (int r = c + 1; r < cols; ++r) {
        const double f = normal[static_cast<std::size_t>(r * cols + c)] / p;
        if (f == 0.0) continue;
        for (int k = c; k < cols; ++k)
          normal[static_cast<std::size_t>(r * cols + k)] -= f * normal[static_cast<std::size_t>(c * cols + k)];
        sol[static_cast<std::size_t>(r)] -= f * sol[static_cast<std::size_t>(c)];
      }
    }
    for (int c = cols - 1; c >= 0; --c) {
      double acc = sol[static_cast<std::size_t>(c)];
      for (int k = c + 1; k < cols; ++k)
        acc -= normal[static_cast<std::size_t>(c * cols + k)] * sol[static_cast<std::size_t>(k)];
      sol[static_cast<std::size_t>(c)] = acc / normal[static_cast<std::size_t>(c * cols + c)];
    }
    for (int r = 0; r <= m; ++r) {
      double acc = rhs[static_cast<std::size_t>(r)];
      for (int c = 0; c < cols; ++c) acc -= mat[static_cast<std::size_t>(r * cols + c)] * sol[static_cast<std::size_t>(c)];
      if (!tol.is_zero(acc, scale)) return std::nullopt;
    }
    for (int c = 0; c < cols; ++c) q.set({e - c, c}, sol[static_cast<std::size_t>(c)]);
  }
  return q;
}

/// Lowest index whose coefficient is not zero under the scale-aware tolerance
/// (scale = largest coefficient of the series), together with the derivative
/// value k! * a_k there.
struct VanishingOrder {
  int k;
  double leading;
};

inline VanishingOrder vanishing_order(const Jet1& s, const Tolerance& tol = kDefaultTolerance) {
  const double scale = s.max_abs();
  for (int i = 0; i <= s.order(); ++i)
    if (!tol.is_zero(s.coeff(i), scale)) return {i, s.extract({i})};
  throw Error(ErrorCode::OrderExceedsTruncation,
              "series vanishes through truncation order " + std::to_string(s.order()));
}

}  // namespace singcrit
