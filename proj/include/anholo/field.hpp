#pragma once

#include <memory>
#include <string>

#include "anholo/expr.hpp"

namespace anholo {

// A real function on the chart answering value and Jet2 queries. Expression-backed,
// grid-backed, or a mix (expressions may reference tabulated fields).
class ScalarField {
 public:
  ScalarField();  // identically zero
  ScalarField(Expression e, std::shared_ptr<const Constants> c);

  static ScalarField constant(double v);
  static ScalarField from_text(const std::string& src, const Constants& c, const ParseOptions& opts = {});
  static ScalarField from_grid(std::shared_ptr<const GridTable> g);

  Jet2 jet(const Point& p, double* quad_err = nullptr) const { return eval_jet(expr_, p, *consts_, quad_err); }
  double value(const Point& p) const { return eval_value(expr_, p, *consts_); }

  const Expression& expr() const { return expr_; }
  const Constants& constants() const { return *consts_; }
  std::shared_ptr<const Constants> constants_ptr() const { return consts_; }

  bool depends_on(int axis) const { return expr_.depends_on(axis); }
  bool is_zero() const { return expr_.is_zero(); }
  bool is_number(double* v = nullptr) const { return expr_.is_number(v); }
  bool is_grid_backed() const { return expr_.has_grid(); }
  std::string text() const { return unparse(expr_); }

  ScalarField derivative(int axis) const { return ScalarField(diff(expr_, axis), consts_); }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);

 private:
  Expression expr_;
  std::shared_ptr<const Constants> consts_;
};

ScalarField apply(Func f, const ScalarField& a);
ScalarField pow(const ScalarField& a, double p);
ScalarField tint(const ScalarField& g, double t0, double abs_tol, double rel_tol);

// merged constant table; clashing values are an error
std::shared_ptr<const Constants> merge_constants(const Constants& a, const Constants& b);

}  // namespace anholo
