#pragma once

// Fixed-size vector helpers shared by real numbers and jets.

#include <algorithm>
#include <array>
#include <cmath>

#include "singcrit/jet.hpp"

namespace singcrit {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

template <class T>
using Triple = std::array<T, 3>;

using Jet1Triple = Triple<Jet1>;
using Jet2Triple = Triple<Jet2>;

template <class T>
T dot(const Triple<T>& a, const Triple<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T>
Triple<T> cross(const Triple<T>& a, const Triple<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// det of the 3x3 matrix with columns a, b, c.
template <class T>
T det3(const Triple<T>& a, const Triple<T>& b, const Triple<T>& c) {
  return dot(a, cross(b, c));
}

template <class T>
Triple<T> operator+(const Triple<T>& a, const Triple<T>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <class T>
Triple<T> operator-(const Triple<T>& a, const Triple<T>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

template <class T, class S>
Triple<T> scaled(const Triple<T>& a, const S& s) {
  return {a[0] * s, a[1] * s, a[2] * s};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline double det2(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

inline double max_abs(const Vec3& a) { return std::max({std::fabs(a[0]), std::fabs(a[1]), std::fabs(a[2])}); }

template <int V>
int min_order(const Triple<Jet<V>>& a) {
  return std::min({a[0].order(), a[1].order(), a[2].order()});
}

template <int V>
Triple<Jet<V>> truncated(const Triple<Jet<V>>& a, int order) {
  return {a[0].truncated(order), a[1].truncated(order), a[2].truncated(order)};
}

template <int V>
Triple<Jet<V>> derivative(const Triple<Jet<V>>& a, int var = 0) {
  return {a[0].derivative(var), a[1].derivative(var), a[2].derivative(var)};
}

template <int V>
Vec3 constant_terms(const Triple<Jet<V>>& a) {
  return {a[0].constant_term(), a[1].constant_term(), a[2].constant_term()};
}

template <int V>
double max_abs(const Triple<Jet<V>>& a) {
  return std::max({a[0].max_abs(), a[1].max_abs(), a[2].max_abs()});
}

/// Derivative values of a curve jet at the base point.
inline Vec3 derivative_at_zero(const Jet1Triple& c, int k) {
  return {c[0].extract({k}), c[1].extract({k}), c[2].extract({k})};
}

/// Determinant of three jet columns after truncating them to a common order.
template <int V>
Jet<V> det3_aligned(const Triple<Jet<V>>& a, const Triple<Jet<V>>& b, const Triple<Jet<V>>& c) {
  const int n = std::min({min_order(a), min_order(b), min_order(c)});
  return det3(truncated(a, n), truncated(b, n), truncated(c, n));
}

template <int V>
Jet<V> dot_aligned(const Triple<Jet<V>>& a, const Triple<Jet<V>>& b) {
  const int n = std::min(min_order(a), min_order(b));
  return dot(truncated(a, n), truncated(b, n));
}

inline Triple<Jet1> compose(const Jet2Triple& field, const JetPath& path) {
  return {compose(field[0], path), compose(field[1], path), compose(field[2], path)};
}

}  // namespace singcrit
