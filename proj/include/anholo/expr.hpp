#pragma once

// Expression trees over the chart variables x1, x2, t, y and named constants.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "anholo/jet.hpp"
#include "anholo/spline.hpp"

namespace anholo {

using Constants = std::map<std::string, double>;
using GridRegistry = std::map<std::string, std::shared_ptr<const GridTable>>;

enum class Func { Sin, Cos, Tan, Exp, Ln, Sqrt, Abs, Tanh, Sinh, Cosh };

enum class NodeKind {
  Num, Var, Const, Neg, Add, Sub, Mul, Div, Pow, Call,
  TInt,  // integral of a over t from t0 to t
  Grid,  // tabulated field
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Num;
  double num = 0.0;
  int var = -1;
  std::string name;
  Func fn = Func::Sin;
  NodePtr a, b;
  // TInt only
  double t0 = 0.0, abs_tol = 1e-10, rel_tol = 1e-9;
  std::shared_ptr<const GridTable> grid;
};

const char* func_name(Func f);
const char* axis_name(int axis);

class Expression {
 public:
  Expression();
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }
  const NodePtr& ptr() const { return root_; }

  // structural identity
  bool operator==(const Expression& o) const;
  bool operator!=(const Expression& o) const { return !(*this == o); }

  static Expression number(double v);
  static Expression variable(int axis);
  static Expression constant(const std::string& name);
  static Expression grid(std::shared_ptr<const GridTable> g);
  static Expression call(Func f, const Expression& a);
  static Expression tint(const Expression& g, double t0, double abs_tol = 1e-10, double rel_tol = 1e-9);

  bool depends_on(int axis) const;
  bool is_number(double* v = nullptr) const;
  bool is_zero() const { double v; return is_number(&v) && v == 0.0; }
  bool has_grid() const;
  void collect_constants(std::set<std::string>& out) const;
  void collect_grids(GridRegistry& out) const;

 private:
  NodePtr root_;
};

// Folding builders (0 and 1 only); parse() never folds.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& a, const Expression& b);

struct ParseOptions {
  // allow tint(...) and references to tabulated fields
  bool extensions = false;
  const GridRegistry* grids = nullptr;
};

Expression parse(const std::string& source, const Constants& constants, const ParseOptions& opts = {});
std::string unparse(const Expression& e);

// quad_err, when given, receives the max quadrature error estimate met during evaluation
Jet2 eval_jet(const Expression& e, const Point& p, const Constants& c, double* quad_err = nullptr);
double eval_value(const Expression& e, const Point& p, const Constants& c, double* quad_err = nullptr);

// symbolic partial derivative; not defined through tabulated fields
Expression diff(const Expression& e, int axis);
// replace a chart variable by a number; t may not be replaced inside tint
Expression substitute(const Expression& e, int axis, double value);

}  // namespace anholo
