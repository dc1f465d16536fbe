#include "anholo/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anholo/error.hpp"

namespace anholo {

namespace {

double step(const AxisSpec& ax) { return (ax.max - ax.min) / (ax.count - 1); }

int cell(const AxisSpec& ax, double x, double& u) {
  double h = step(ax);
  double r = (x - ax.min) / h;
  int k = static_cast<int>(std::floor(r));
  k = std::clamp(k, 0, ax.count - 2);
  u = r - k;
  return k;
}

}  // namespace

std::vector<double> spline_slopes(const AxisSpec& ax, const double* y, int stride) {
  const int n = ax.count;
  std::vector<double> s(n, 0.0);
  if (n < 2) return s;
  const double h = step(ax);
  auto Y = [&](int i) { return y[static_cast<size_t>(i) * stride]; };
  if (n == 2) {
    s[0] = s[1] = (Y(1) - Y(0)) / h;
    return s;
  }
  if (n == 3) {
    // not-a-knot with three nodes is the interpolating parabola
    s[0] = (-3 * Y(0) + 4 * Y(1) - Y(2)) / (2 * h);
    s[1] = (Y(2) - Y(0)) / (2 * h);
    s[2] = (Y(0) - 4 * Y(1) + 3 * Y(2)) / (2 * h);
    return s;
  }
  std::vector<double> del(n - 1);
  for (int i = 0; i + 1 < n; ++i) del[i] = (Y(i + 1) - Y(i)) / h;
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  di[0] = 1.0; up[0] = 2.0; rhs[0] = 0.5 * (5 * del[0] + del[1]);
  for (int i = 1; i + 1 < n; ++i) {
    lo[i] = 1.0; di[i] = 4.0; up[i] = 1.0;
    rhs[i] = 3.0 * (del[i - 1] + del[i]);
  }
  lo[n - 1] = 2.0; di[n - 1] = 1.0; rhs[n - 1] = 0.5 * (del[n - 3] + 5 * del[n - 2]);
  // Thomas sweep
  for (int i = 1; i < n; ++i) {
    double m = lo[i] / di[i - 1];
    di[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  s[n - 1] = rhs[n - 1] / di[n - 1];
  for (int i = n - 2; i >= 0; --i) s[i] = (rhs[i] - up[i] * s[i + 1]) / di[i];
  return s;
}

D2 hermite3_eval(const AxisSpec& ax, const double* y, const double* s, int stride, double x) {
  if (ax.count == 1) return {y[0], 0.0, 0.0};
  double u;
  int k = cell(ax, x, u);
  double h = step(ax);
  size_t i0 = static_cast<size_t>(k) * stride, i1 = static_cast<size_t>(k + 1) * stride;
  double y0 = y[i0], y1 = y[i1], s0 = s[i0] * h, s1 = s[i1] * h;
  double c2 = 3 * (y1 - y0) - 2 * s0 - s1;
  double c3 = 2 * (y0 - y1) + s0 + s1;
  return {y0 + u * (s0 + u * (c2 + u * c3)), (s0 + u * (2 * c2 + 3 * c3 * u)) / h,
          (2 * c2 + 6 * c3 * u) / (h * h)};
}

D2 spline_eval(const AxisSpec& ax, const double* y, int stride, double x) {
  if (ax.count == 1) return {y[0], 0.0, 0.0};
  std::vector<double> s = spline_slopes(ax, y, stride);
  // slopes are packed with unit stride
  if (stride == 1) return hermite3_eval(ax, y, s.data(), 1, x);
  std::vector<double> yy(ax.count);
  for (int i = 0; i < ax.count; ++i) yy[i] = y[static_cast<size_t>(i) * stride];
  return hermite3_eval(ax, yy.data(), s.data(), 1, x);
}

D2 hermite5_eval(const AxisSpec& ax, const double* y, const double* d1, const double* d2, int stride,
                 double x) {
  if (ax.count == 1) return {y[0], 0.0, 0.0};
  double u;
  int k = cell(ax, x, u);
  double h = step(ax);
  size_t i0 = static_cast<size_t>(k) * stride, i1 = static_cast<size_t>(k + 1) * stride;
  double c0 = y[i0], c1 = h * d1[i0], c2 = 0.5 * h * h * d2[i0];
  double A = y[i1] - c0 - c1 - c2;
  double B = h * d1[i1] - c1 - 2 * c2;
  double C = h * h * d2[i1] - 2 * c2;
  double c3 = 10 * A - 4 * B + 0.5 * C;
  double c4 = -15 * A + 7 * B - C;
  double c5 = 6 * A - 3 * B + 0.5 * C;
  double p = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
  double dp = c1 + u * (2 * c2 + u * (3 * c3 + u * (4 * c4 + u * 5 * c5)));
  double ddp = 2 * c2 + u * (6 * c3 + u * (12 * c4 + u * 20 * c5));
  return {p, dp / h, ddp / (h * h)};
}

GridTable::GridTable(std::string name, std::array<AxisSpec, 3> axes, std::vector<double> values,
                     std::vector<double> dt, std::vector<double> dtt)
    : name_(std::move(name)), axes_(axes), values_(std::move(values)), dt_(std::move(dt)),
      dtt_(std::move(dtt)) {
  size_t n = 1;
  for (auto& a : axes_) {
    if (a.count < 1) fail(ErrorKind::Precondition, "grid axis count must be positive");
    if (a.count > 1 && !(a.min < a.max)) fail(ErrorKind::Precondition, "grid axis needs min < max");
    n *= static_cast<size_t>(a.count);
  }
  if (values_.size() != n) fail(ErrorKind::Precondition, "grid '" + name_ + "': value count does not match shape");
  if (!dt_.empty() && (dt_.size() != n || dtt_.size() != n))
    fail(ErrorKind::Precondition, "grid '" + name_ + "': derivative tables do not match shape");
  if (dt_.empty() && axes_[2].count > 1) {
    slopes_t_.resize(n);
    for (int i1 = 0; i1 < axes_[0].count; ++i1)
      for (int i2 = 0; i2 < axes_[1].count; ++i2) {
        size_t base = index(i1, i2, 0);
        auto s = spline_slopes(axes_[2], values_.data() + base, 1);
        std::copy(s.begin(), s.end(), slopes_t_.begin() + base);
      }
  }
  if (!dt_.empty()) order_ = 5;
}

void GridTable::check_inside(const Point& p) const {
  for (int a = 0; a < 3; ++a) {
    const auto& ax = axes_[a];
    if (ax.count == 1) continue;
    double tol = 1e-12 * (ax.max - ax.min);
    if (p[a] < ax.min - tol || p[a] > ax.max + tol) {
      std::ostringstream os;
      os << "grid '" << name_ << "' queried outside its domain on axis " << a << " at " << p[a] << " (domain ["
         << ax.min << ", " << ax.max << "])";
      fail(ErrorKind::Domain, os.str());
    }
  }
}

Jet2 GridTable::jet(const Point& p) const {
  check_inside(p);
  const int n1 = axes_[0].count, n2 = axes_[1].count, nt = axes_[2].count;
  std::vector<double> A0(n1 * n2), A1(n1 * n2), A2(n1 * n2);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) {
      size_t base = index(i1, i2, 0);
      D2 r;
      if (nt == 1)
        r = {values_[base], 0.0, 0.0};
      else if (!dt_.empty())
        r = hermite5_eval(axes_[2], values_.data() + base, dt_.data() + base, dtt_.data() + base, 1, p[T]);
      else
        r = hermite3_eval(axes_[2], values_.data() + base, slopes_t_.data() + base, 1, p[T]);
      A0[i1 * n2 + i2] = r[0];
      A1[i1 * n2 + i2] = r[1];
      A2[i1 * n2 + i2] = r[2];
    }
  std::vector<double> V(n1), V2(n1), V22(n1), Vt(n1), Vt2(n1), Vtt(n1);
  for (int i1 = 0; i1 < n1; ++i1) {
    D2 a = spline_eval(axes_[1], A0.data() + i1 * n2, 1, p[X2]);
    D2 b = spline_eval(axes_[1], A1.data() + i1 * n2, 1, p[X2]);
    D2 c = spline_eval(axes_[1], A2.data() + i1 * n2, 1, p[X2]);
    V[i1] = a[0]; V2[i1] = a[1]; V22[i1] = a[2];
    Vt[i1] = b[0]; Vt2[i1] = b[1];
    Vtt[i1] = c[0];
  }
  D2 a = spline_eval(axes_[0], V.data(), 1, p[X1]);
  D2 b = spline_eval(axes_[0], V2.data(), 1, p[X1]);
  D2 c = spline_eval(axes_[0], V22.data(), 1, p[X1]);
  D2 d = spline_eval(axes_[0], Vt.data(), 1, p[X1]);
  D2 e = spline_eval(axes_[0], Vt2.data(), 1, p[X1]);
  D2 f = spline_eval(axes_[0], Vtt.data(), 1, p[X1]);
  Jet2 j(a[0]);
  j.g = {a[1], b[0], d[0], 0.0};
  j.dd(X1, X1) = a[2];
  j.dd(X1, X2) = b[1];
  j.dd(X1, T) = d[1];
  j.dd(X2, X2) = c[0];
  j.dd(X2, T) = e[0];
  j.dd(T, T) = f[0];
  return j;
}

}  // namespace anholo
