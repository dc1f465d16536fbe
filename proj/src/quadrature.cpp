#include "anholo/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace anholo {

namespace {

// Dormand-Prince tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

void rk45_integrate(const OdeRhs& f, double t_start, double t_end, std::vector<double>& y,
                    const OdeSettings& s, OdeStats& stats) {
  const size_t n = y.size();
  if (t_start == t_end) return;
  const double dir = t_end > t_start ? 1.0 : -1.0;
  double t = t_start;
  double h = std::min(s.h_init, std::fabs(t_end - t_start));
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);
  f(t, y, k1);
  int steps = 0;
  while (dir * (t_end - t) > 0) {
    if (++steps > s.max_steps) fail(ErrorKind::Convergence, "ODE step budget exhausted");
    bool last = false;
    if (h >= std::fabs(t_end - t)) {
      h = std::fabs(t_end - t);
      last = true;
    }
    double hs = dir * h;
    for (size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    f(t + c2 * hs, yt, k2);
    for (size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * hs, yt, k3);
    for (size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * hs, yt, k4);
    for (size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * hs, yt, k5);
    for (size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + hs, yt, k6);
    for (size_t i = 0; i < n; ++i)
      y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + hs, y5, k7);

    double err = 0.0, errabs = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = s.abs_tol + s.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      err = std::max(err, std::fabs(ei) / sc);
      errabs = std::max(errabs, std::fabs(ei));
    }
    if (!std::isfinite(err)) {
      h *= 0.25;
      if (h < 1e-14) fail(ErrorKind::Convergence, "ODE step size underflow");
      continue;
    }
    if (err <= 1.0) {
      t = last ? t_end : t + hs;
      y = y5;
      k1 = k7;
      stats.err_sum += errabs;
      ++stats.steps;
    }
    double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14 * std::max(1.0, std::fabs(t))) fail(ErrorKind::Convergence, "ODE step size underflow");
  }
}

}  // namespace anholo
