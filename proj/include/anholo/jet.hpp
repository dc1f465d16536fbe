#pragma once

// Second-order jets over the chart (x1, x2, t, y).

#include <array>
#include <cmath>

namespace anholo {

// chart axes, in this order everywhere
enum Axis : int { X1 = 0, X2 = 1, T = 2, Y = 3 };

using Point = std::array<double, 4>;

// packed index of the symmetric pair (i, j)
constexpr int hidx(int i, int j) {
  if (i > j) { int s = i; i = j; j = s; }
  return i * 4 - i * (i - 1) / 2 + (j - i);
}

struct Jet2 {
  double v = 0.0;
  std::array<double, 4> g{};
  std::array<double, 10> h{};

  Jet2() = default;
  Jet2(double value) : v(value) {}

  static Jet2 variable(int axis, double x) {
    Jet2 j(x);
    j.g[axis] = 1.0;
    return j;
  }

  double d(int i) const { return g[i]; }
  double dd(int i, int j) const { return h[hidx(i, j)]; }
  double& dd(int i, int j) { return h[hidx(i, j)]; }

  bool finite() const {
    if (!std::isfinite(v)) return false;
    for (double x : g) if (!std::isfinite(x)) return false;
    for (double x : h) if (!std::isfinite(x)) return false;
    return true;
  }
};

// f(u) given f, f', f'' at u.v
inline Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
  Jet2 r(f0);
  for (int i = 0; i < 4; ++i) r.g[i] = f1 * u.g[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) r.h[hidx(i, j)] = f1 * u.h[hidx(i, j)] + f2 * u.g[i] * u.g[j];
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r(-a.v);
  for (int i = 0; i < 4; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 10; ++i) r.h[i] = -a.h[i];
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.v + b.v);
  for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.v - b.v);
  for (int i = 0; i < 4; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < 10; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.v * b.v);
  for (int i = 0; i < 4; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      int k = hidx(i, j);
      r.h[k] = a.v * b.h[k] + b.v * a.h[k] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
  return r;
}

inline Jet2 operator*(double s, const Jet2& a) {
  Jet2 r(s * a.v);
  for (int i = 0; i < 4; ++i) r.g[i] = s * a.g[i];
  for (int i = 0; i < 10; ++i) r.h[i] = s * a.h[i];
  return r;
}
inline Jet2 operator*(const Jet2& a, double s) { return s * a; }

inline Jet2 reciprocal(const Jet2& a) {
  double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }
inline Jet2 operator/(const Jet2& a, double s) { return (1.0 / s) * a; }

inline Jet2& operator+=(Jet2& a, const Jet2& b) { return a = a + b; }
inline Jet2& operator-=(Jet2& a, const Jet2& b) { return a = a - b; }
inline Jet2& operator*=(Jet2& a, const Jet2& b) { return a = a * b; }

// unchecked elementary functions; domain policy lives in the expression evaluator
inline Jet2 sin(const Jet2& u) { double s = std::sin(u.v), c = std::cos(u.v); return chain(u, s, c, -s); }
inline Jet2 cos(const Jet2& u) { double s = std::sin(u.v), c = std::cos(u.v); return chain(u, c, -s, -c); }
inline Jet2 tan(const Jet2& u) {
  double t = std::tan(u.v), s2 = 1.0 + t * t;
  return chain(u, t, s2, 2.0 * t * s2);
}
inline Jet2 exp(const Jet2& u) { double e = std::exp(u.v); return chain(u, e, e, e); }
inline Jet2 log(const Jet2& u) { return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v)); }
inline Jet2 sqrt(const Jet2& u) {
  double s = std::sqrt(u.v);
  return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}
inline Jet2 abs(const Jet2& u) {
  double sg = u.v < 0 ? -1.0 : 1.0;
  return chain(u, std::fabs(u.v), sg, 0.0);
}
inline Jet2 tanh(const Jet2& u) {
  double t = std::tanh(u.v), s = 1.0 - t * t;
  return chain(u, t, s, -2.0 * t * s);
}
inline Jet2 sinh(const Jet2& u) { return chain(u, std::sinh(u.v), std::cosh(u.v), std::sinh(u.v)); }
inline Jet2 cosh(const Jet2& u) { return chain(u, std::cosh(u.v), std::sinh(u.v), std::cosh(u.v)); }

// u^p for real constant p, u > 0 unless p is an integer
inline Jet2 pow(const Jet2& u, double p) {
  double f0 = std::pow(u.v, p);
  double f1 = p * std::pow(u.v, p - 1.0);
  double f2 = p * (p - 1.0) * std::pow(u.v, p - 2.0);
  return chain(u, f0, f1, f2);
}

inline Jet2 powi(const Jet2& u, long n) {
  if (n < 0) return reciprocal(powi(u, -n));
  Jet2 r(1.0), b = u;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

}  // namespace anholo
