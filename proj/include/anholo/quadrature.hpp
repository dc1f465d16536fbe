#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "anholo/error.hpp"
#include "anholo/jet.hpp"

namespace anholo {

struct QuadratureSettings {
  double t0 = 1.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 200000;
};

template <class V>
struct QuadResult {
  V value{};
  double err = 0.0;  // estimated absolute error (max-norm)
  int subdivisions = 0;
};

inline double max_norm(double x) { return std::fabs(x); }
inline double max_norm(const Jet2& j) {
  double m = std::fabs(j.v);
  for (double x : j.g) m = std::max(m, std::fabs(x));
  for (double x : j.h) m = std::max(m, std::fabs(x));
  return m;
}

namespace detail {

template <class V, class F>
struct Simpson {
  F& f;
  double abs_tol, rel_tol;
  int budget;
  int used = 0;
  double err = 0.0;

  V rec(double a, double b, const V& fa, const V& fm, const V& fb, const V& whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    V flm = f(lm), frm = f(rm);
    double h = b - a;
    V left = (h / 12.0) * (fa + 4.0 * flm + fm);
    V right = (h / 12.0) * (fm + 4.0 * frm + fb);
    V both = left + right;
    double delta = max_norm(both - whole);
    if (++used > budget)
      fail(ErrorKind::Convergence, "adaptive Simpson exceeded its subdivision budget");
    if (depth <= 0 || delta <= 15.0 * tol) {
      err += delta / 15.0;
      return both + (1.0 / 15.0) * (both - whole);
    }
    return rec(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           rec(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace detail

// Adaptive Simpson on [a, b]; V needs +, scalar *, and max_norm.
template <class V, class F>
QuadResult<V> adaptive_simpson(F&& f, double a, double b, double abs_tol, double rel_tol,
                               int max_subdivisions = 200000) {
  QuadResult<V> out;
  if (a == b) return out;
  V fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  V whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  // crude magnitude pass sets the relative target
  double scale = max_norm(whole);
  double tol = std::max(abs_tol, rel_tol * scale);
  detail::Simpson<V, std::remove_reference_t<F>> s{f, abs_tol, rel_tol, max_subdivisions};
  out.value = s.rec(a, b, fa, fm, fb, whole, tol, 50);
  out.err = s.err;
  out.subdivisions = s.used;
  return out;
}

// Dormand-Prince 5(4) with step control, integrating from t_start to t_end.
struct OdeSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  double h_init = 1e-3;
  int max_steps = 1000000;
};

struct OdeStats {
  double err_sum = 0.0;  // sum of accepted local error estimates
  int steps = 0;
};

using OdeRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

void rk45_integrate(const OdeRhs& f, double t_start, double t_end, std::vector<double>& y,
                    const OdeSettings& s, OdeStats& stats);

}  // namespace anholo
