#pragma once

#include <array>
#include <string>
#include <vector>

#include "anholo/jet.hpp"

namespace anholo {

struct AxisSpec {
  double min = 0.0, max = 0.0;
  int count = 1;  // 1 means the table is constant along this axis
  double node(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

// value, first and second derivative of a 1-d interpolant
using D2 = std::array<double, 3>;

// Not-a-knot cubic spline through uniformly spaced samples y[0..n), stride between samples.
D2 spline_eval(const AxisSpec& ax, const double* y, int stride, double x);

// Node slopes of the not-a-knot spline (for cached evaluation).
std::vector<double> spline_slopes(const AxisSpec& ax, const double* y, int stride);

// Cubic Hermite on the cell containing x, given node values and slopes.
D2 hermite3_eval(const AxisSpec& ax, const double* y, const double* s, int stride, double x);

// Quintic Hermite with node values, first and second derivatives.
D2 hermite5_eval(const AxisSpec& ax, const double* y, const double* d1, const double* d2, int stride,
                 double x);

// Tabulation over (x1, x2, t), row-major with t fastest. Optional dt/dtt switch the
// t-direction to quintic Hermite; otherwise every axis uses a not-a-knot cubic spline.
class GridTable {
 public:
  GridTable(std::string name, std::array<AxisSpec, 3> axes, std::vector<double> values,
            std::vector<double> dt = {}, std::vector<double> dtt = {});

  const std::string& name() const { return name_; }
  const std::array<AxisSpec, 3>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& dt() const { return dt_; }
  const std::vector<double>& dtt() const { return dtt_; }
  int order() const { return order_; }
  void set_order(int o) { order_ = o; }

  size_t index(int i1, int i2, int it) const {
    return (static_cast<size_t>(i1) * axes_[1].count + i2) * axes_[2].count + it;
  }

  bool depends_on(int axis) const { return axis < 3 && axes_[axis].count > 1; }

  Jet2 jet(const Point& p) const;
  double value(const Point& p) const { return jet(p).v; }

 private:
  void check_inside(const Point& p) const;

  std::string name_;
  std::array<AxisSpec, 3> axes_;
  std::vector<double> values_, dt_, dtt_;
  std::vector<double> slopes_t_;  // cached along t when not Hermite-5
  int order_ = 3;
};

}  // namespace anholo
