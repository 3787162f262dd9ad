#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> yields exact mixed
// second derivatives: seed the inner tangent along one direction and the
// outer tangent along another, then read d(d(f)).

#include <cmath>
#include <type_traits>

namespace mshj {

template <typename T>
struct Dual {
  T v{};  // primal
  T d{};  // tangent

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T tangent) : v(value), d(tangent) {}
};

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

inline double primal(double x) { return x; }
template <typename T>
double primal(const Dual<T>& x) {
  return primal(x.v);
}

template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}
template <typename T>
constexpr Dual<T> operator*(double s, const Dual<T>& a) {
  return {s * a.v, s * a.d};
}

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -(sin(a.v) * a.d)};
}
template <typename T>
Dual<T> tan(const Dual<T>& a) {
  using std::tan;
  T t = tan(a.v);
  return {t, (T(1.0) + t * t) * a.d};
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T r = sqrt(a.v);
  return {r, a.d / (T(2.0) * r)};
}
template <typename T>
Dual<T> asin(const Dual<T>& a) {
  using std::asin;
  using std::sqrt;
  return {asin(a.v), a.d / sqrt(T(1.0) - a.v * a.v)};
}
template <typename T>
Dual<T> atan(const Dual<T>& a) {
  using std::atan;
  return {atan(a.v), a.d / (T(1.0) + a.v * a.v)};
}

// Derivative of |x| is sign(x) with sign(0) = 0.
template <typename T>
Dual<T> abs(const Dual<T>& a) {
  double p = primal(a);
  double s = p > 0.0 ? 1.0 : (p < 0.0 ? -1.0 : 0.0);
  return s * a;
}

// Real power with positive base: a^b = exp(b log a).
template <typename T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  using std::log;
  using std::pow;
  T value = pow(a.v, b.v);
  T la = log(a.v);
  return {value, value * (b.d * la + b.v * a.d / a.v)};
}

}  // namespace mshj
