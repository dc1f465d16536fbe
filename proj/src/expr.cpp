#include "anholo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "anholo/error.hpp"
#include "anholo/quadrature.hpp"

namespace anholo {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
    case Func::Tanh: return "tanh";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
  }
  return "?";
}

const char* axis_name(int axis) {
  static const char* names[] = {"x1", "x2", "t", "y"};
  return names[axis];
}

namespace {

NodePtr make(NodeKind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Num;
  n->num = v;
  return n;
}

bool lookup_func(const std::string& s, Func& f) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},
      {"ln", Func::Ln},     {"sqrt", Func::Sqrt}, {"abs", Func::Abs},   {"tanh", Func::Tanh},
      {"sinh", Func::Sinh}, {"cosh", Func::Cosh}};
  for (auto& [n, fn] : table)
    if (s == n) { f = fn; return true; }
  return false;
}

int lookup_axis(const std::string& s) {
  if (s == "x1") return X1;
  if (s == "x2") return X2;
  if (s == "t") return T;
  if (s == "y") return Y;
  return -1;
}

bool same(const NodePtr& x, const NodePtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NodeKind::Num: return x->num == y->num || (std::isnan(x->num) && std::isnan(y->num));
    case NodeKind::Var: return x->var == y->var;
    case NodeKind::Const: return x->name == y->name;
    case NodeKind::Grid: return x->name == y->name && x->grid == y->grid;
    case NodeKind::Call: return x->fn == y->fn && same(x->a, y->a);
    case NodeKind::TInt:
      return x->t0 == y->t0 && x->abs_tol == y->abs_tol && x->rel_tol == y->rel_tol && same(x->a, y->a);
    default: return same(x->a, y->a) && same(x->b, y->b);
  }
}

// ---------------------------------------------------------------- parser

struct Token {
  enum Kind { Num, Ident, Op, End } kind;
  std::string text;
  double value = 0.0;
  size_t pos = 0;
};

class Parser {
 public:
  Parser(const std::string& src, const Constants& c, const ParseOptions& o) : src_(src), consts_(c), opts_(o) {
    lex();
  }

  Expression run() {
    if (toks_.size() == 1) syntax(toks_[0].pos, "empty expression");
    NodePtr e = expr();
    if (peek().kind != Token::End) syntax(peek().pos, "unexpected '" + peek().text + "'");
    return Expression(e);
  }

 private:
  [[noreturn]] void syntax(size_t pos, const std::string& msg) const {
    std::ostringstream os;
    os << "column " << pos + 1 << ": " << msg;
    fail(ErrorKind::Syntax, os.str());
  }

  void lex() {
    size_t i = 0, n = src_.size();
    while (i < n) {
      unsigned char ch = static_cast<unsigned char>(src_[i]);
      if (std::isspace(ch)) { ++i; continue; }
      if (std::isdigit(ch) || (ch == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src_[i + 1])))) {
        size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        if (j < n && src_[j] == '.') {
          ++j;
          while (j < n && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        }
        if (j < n && (src_[j] == 'e' || src_[j] == 'E')) {
          size_t k = j + 1;
          if (k < n && (src_[k] == '+' || src_[k] == '-')) ++k;
          if (k < n && std::isdigit(static_cast<unsigned char>(src_[k]))) {
            while (k < n && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
            j = k;
          } else {
            syntax(j, "malformed exponent in number");
          }
        }
        std::string lit = src_.substr(i, j - i);
        toks_.push_back({Token::Num, lit, std::strtod(lit.c_str(), nullptr), i});
        i = j;
        continue;
      }
      if (std::isalpha(ch) || ch == '_') {
        size_t j = i;
        while (j < n && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) ++j;
        toks_.push_back({Token::Ident, src_.substr(i, j - i), 0.0, i});
        i = j;
        continue;
      }
      if (std::string("+-*/^(),").find(static_cast<char>(ch)) != std::string::npos) {
        toks_.push_back({Token::Op, std::string(1, static_cast<char>(ch)), 0.0, i});
        ++i;
        continue;
      }
      syntax(i, std::string("unexpected character '") + static_cast<char>(ch) + "'");
    }
    toks_.push_back({Token::End, "end of input", 0.0, n});
  }

  const Token& peek() const { return toks_[k_]; }
  bool is_op(const char* s) const { return peek().kind == Token::Op && peek().text == s; }
  void expect(const char* s) {
    if (!is_op(s)) syntax(peek().pos, std::string("expected '") + s + "' but found '" + peek().text + "'");
    ++k_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (is_op("+") || is_op("-")) {
      NodeKind k = peek().text == "+" ? NodeKind::Add : NodeKind::Sub;
      ++k_;
      lhs = make(k, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (is_op("*") || is_op("/")) {
      NodeKind k = peek().text == "*" ? NodeKind::Mul : NodeKind::Div;
      ++k_;
      lhs = make(k, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    if (is_op("-")) {
      ++k_;
      return make(NodeKind::Neg, power());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (is_op("^")) {
      ++k_;
      return make(NodeKind::Pow, base, factor());
    }
    return base;
  }

  std::vector<NodePtr> args() {
    std::vector<NodePtr> out;
    expect("(");
    if (is_op(")")) {
      ++k_;
      return out;
    }
    out.push_back(expr());
    while (is_op(",")) {
      ++k_;
      out.push_back(expr());
    }
    expect(")");
    return out;
  }

  double number_arg(const NodePtr& n, size_t pos) {
    // tint bounds and tolerances: a literal, possibly negated
    if (n->kind == NodeKind::Num) return n->num;
    if (n->kind == NodeKind::Neg && n->a->kind == NodeKind::Num) return -n->a->num;
    if (n->kind == NodeKind::Const) return consts_.at(n->name);
    syntax(pos, "tint bounds must be numeric literals");
  }

  NodePtr atom() {
    const Token tok = peek();
    if (tok.kind == Token::Num) {
      ++k_;
      return make_num(tok.value);
    }
    if (is_op("(")) {
      ++k_;
      NodePtr e = expr();
      expect(")");
      return e;
    }
    if (tok.kind != Token::Ident) syntax(tok.pos, "expected a number, name or '(' but found '" + tok.text + "'");
    ++k_;
    const std::string& id = tok.text;
    Func f;
    if (lookup_func(id, f)) {
      if (!is_op("(")) syntax(tok.pos, "function '" + id + "' needs an argument list");
      auto a = args();
      if (a.size() != 1) {
        std::ostringstream os;
        os << "column " << tok.pos + 1 << ": " << id << " takes 1 argument, got " << a.size();
        fail(ErrorKind::Arity, os.str());
      }
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Call;
      n->fn = f;
      n->a = a[0];
      return n;
    }
    if (opts_.extensions && id == "tint") {
      if (!is_op("(")) syntax(tok.pos, "tint needs an argument list");
      auto a = args();
      if (a.size() != 2 && a.size() != 4) {
        std::ostringstream os;
        os << "column " << tok.pos + 1 << ": tint takes 2 or 4 arguments, got " << a.size();
        fail(ErrorKind::Arity, os.str());
      }
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::TInt;
      n->a = a[0];
      n->t0 = number_arg(a[1], tok.pos);
      if (a.size() == 4) {
        n->abs_tol = number_arg(a[2], tok.pos);
        n->rel_tol = number_arg(a[3], tok.pos);
      }
      return n;
    }
    if (is_op("(")) {
      std::ostringstream os;
      os << "column " << tok.pos + 1 << ": '" << id << "' is not a function";
      fail(ErrorKind::UnknownIdentifier, os.str());
    }
    int ax = lookup_axis(id);
    if (ax >= 0) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Var;
      n->var = ax;
      n->name = id;
      return n;
    }
    if (consts_.count(id)) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Const;
      n->name = id;
      return n;
    }
    if (opts_.extensions && opts_.grids) {
      auto it = opts_.grids->find(id);
      if (it != opts_.grids->end()) {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Grid;
        n->name = id;
        n->grid = it->second;
        return n;
      }
    }
    std::ostringstream os;
    os << "column " << tok.pos + 1 << ": '" << id << "' is neither a chart variable nor a declared constant";
    fail(ErrorKind::UnknownIdentifier, os.str());
  }

  const std::string& src_;
  const Constants& consts_;
  const ParseOptions& opts_;
  std::vector<Token> toks_;
  size_t k_ = 0;
};

// ---------------------------------------------------------------- evaluation

struct Ctx {
  const Point& p;
  const Constants& c;
  double* qerr;
};

double leaf_var(double, const Point& p, int axis) { return p[axis]; }
Jet2 leaf_var(Jet2, const Point& p, int axis) { return Jet2::variable(axis, p[axis]); }

bool constant_exponent(const Node& n) {
  switch (n.kind) {
    case NodeKind::Num:
    case NodeKind::Const: return true;
    case NodeKind::Var:
    case NodeKind::TInt:
    case NodeKind::Grid: return false;
    case NodeKind::Neg:
    case NodeKind::Call: return constant_exponent(*n.a);
    default: return constant_exponent(*n.a) && constant_exponent(*n.b);
  }
}

double value_of(double x) { return x; }
double value_of(const Jet2& x) { return x.v; }

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(ErrorKind::Overflow, std::string("non-finite result in ") + what);
}

template <class S>
S apply(Func f, const S& u) {
  using std::abs;
  using std::cos;
  using std::cosh;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  using std::tan;
  using std::tanh;
  const double x = value_of(u);
  constexpr bool jet = std::is_same_v<S, Jet2>;
  switch (f) {
    case Func::Sin: return sin(u);
    case Func::Cos: return cos(u);
    case Func::Tan:
      if (std::fabs(std::cos(x)) < 1e-300) fail(ErrorKind::Domain, "tan at a pole");
      return tan(u);
    case Func::Exp: return exp(u);
    case Func::Ln:
      if (!(x > 0)) fail(ErrorKind::Domain, "ln of nonpositive argument");
      return log(u);
    case Func::Sqrt:
      if (x < 0 || (jet && x == 0)) fail(ErrorKind::Domain, "sqrt of nonpositive argument");
      return sqrt(u);
    case Func::Abs:
      if (jet && std::fabs(x) < 1e-12) fail(ErrorKind::Domain, "abs differentiated at zero");
      return abs(u);
    case Func::Tanh: return tanh(u);
    case Func::Sinh: return sinh(u);
    case Func::Cosh: return cosh(u);
  }
  return u;
}

template <class S>
S eval_node(const Node& n, const Ctx& cx);

template <class S>
S eval_pow(const Node& n, const Ctx& cx) {
  S u = eval_node<S>(*n.a, cx);
  if (constant_exponent(*n.b)) {
    double e = value_of(eval_node<S>(*n.b, cx));
    if (e == std::floor(e) && std::fabs(e) <= 1e6) {
      if (e < 0 && value_of(u) == 0.0) fail(ErrorKind::Domain, "division by zero in negative power");
      if constexpr (std::is_same_v<S, Jet2>) return powi(u, static_cast<long>(e));
      else return std::pow(u, e);
    }
    if (!(value_of(u) > 0)) fail(ErrorKind::Domain, "non-integer power of nonpositive base");
    if constexpr (std::is_same_v<S, Jet2>) return pow(u, e);
    else return std::pow(u, e);
  }
  if (!(value_of(u) > 0)) fail(ErrorKind::Domain, "variable exponent needs a positive base");
  S v = eval_node<S>(*n.b, cx);
  using std::exp;
  using std::log;
  return exp(v * log(u));
}

double eval_tint(const Node& n, const Ctx& cx, double) {
  Point q = cx.p;
  auto f = [&](double s) {
    q[T] = s;
    return eval_node<double>(*n.a, Ctx{q, cx.c, cx.qerr});
  };
  auto r = adaptive_simpson<double>(f, n.t0, cx.p[T], n.abs_tol, n.rel_tol);
  if (cx.qerr) *cx.qerr = std::max(*cx.qerr, r.err);
  return r.value;
}

Jet2 eval_tint(const Node& n, const Ctx& cx, Jet2) {
  Point q = cx.p;
  auto f = [&](double s) {
    q[T] = s;
    return eval_node<Jet2>(*n.a, Ctx{q, cx.c, cx.qerr});
  };
  auto r = adaptive_simpson<Jet2>(f, n.t0, cx.p[T], n.abs_tol, n.rel_tol);
  if (cx.qerr) *cx.qerr = std::max(*cx.qerr, r.err);
  Jet2 top = eval_node<Jet2>(*n.a, cx);  // integrand at the upper limit
  Jet2 out = r.value;
  out.g[T] = top.v;
  for (int i = 0; i < 4; ++i) out.dd(i, T) = top.g[i];
  return out;
}

template <class S>
S eval_node(const Node& n, const Ctx& cx) {
  S r{};
  switch (n.kind) {
    case NodeKind::Num: return S(n.num);
    case NodeKind::Var: return leaf_var(S{}, cx.p, n.var);
    case NodeKind::Const: {
      auto it = cx.c.find(n.name);
      if (it == cx.c.end()) fail(ErrorKind::UnknownIdentifier, "constant '" + n.name + "' has no value");
      return S(it->second);
    }
    case NodeKind::Neg: return -eval_node<S>(*n.a, cx);
    case NodeKind::Add: r = eval_node<S>(*n.a, cx) + eval_node<S>(*n.b, cx); break;
    case NodeKind::Sub: r = eval_node<S>(*n.a, cx) - eval_node<S>(*n.b, cx); break;
    case NodeKind::Mul: r = eval_node<S>(*n.a, cx) * eval_node<S>(*n.b, cx); break;
    case NodeKind::Div: {
      S num = eval_node<S>(*n.a, cx);
      S den = eval_node<S>(*n.b, cx);
      if (value_of(den) == 0.0) fail(ErrorKind::Domain, "division by zero");
      r = num / den;
      break;
    }
    case NodeKind::Pow: r = eval_pow<S>(n, cx); break;
    case NodeKind::Call: r = apply<S>(n.fn, eval_node<S>(*n.a, cx)); break;
    case NodeKind::TInt: r = eval_tint(n, cx, S{}); break;
    case NodeKind::Grid:
      if constexpr (std::is_same_v<S, Jet2>) r = n.grid->jet(cx.p);
      else r = n.grid->value(cx.p);
      break;
  }
  check_finite(value_of(r), "expression evaluation");
  return r;
}

// ---------------------------------------------------------------- unparse

void emit(const Node& n, std::string& out) {
  char buf[64];
  switch (n.kind) {
    case NodeKind::Num:
      if (n.num < 0) {
        std::snprintf(buf, sizeof buf, "(-%.17g)", -n.num);
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", n.num);
      }
      out += buf;
      return;
    case NodeKind::Var: out += axis_name(n.var); return;
    case NodeKind::Const:
    case NodeKind::Grid: out += n.name; return;
    case NodeKind::Neg:
      out += "(-";
      emit(*n.a, out);
      out += ")";
      return;
    case NodeKind::Call:
      out += func_name(n.fn);
      out += "(";
      emit(*n.a, out);
      out += ")";
      return;
    case NodeKind::TInt:
      out += "tint(";
      emit(*n.a, out);
      std::snprintf(buf, sizeof buf, ", %.17g", n.t0);
      out += buf;
      std::snprintf(buf, sizeof buf, ", %.17g", n.abs_tol);
      out += buf;
      std::snprintf(buf, sizeof buf, ", %.17g)", n.rel_tol);
      out += buf;
      return;
    default: break;
  }
  const char* op = "+";
  switch (n.kind) {
    case NodeKind::Sub: op = "-"; break;
    case NodeKind::Mul: op = "*"; break;
    case NodeKind::Div: op = "/"; break;
    case NodeKind::Pow: op = "^"; break;
    default: break;
  }
  out += "(";
  emit(*n.a, out);
  out += op;
  emit(*n.b, out);
  out += ")";
}

bool depends(const Node& n, int axis) {
  switch (n.kind) {
    case NodeKind::Num:
    case NodeKind::Const: return false;
    case NodeKind::Var: return n.var == axis;
    case NodeKind::Grid: return n.grid->depends_on(axis);
    case NodeKind::TInt: return axis == T || depends(*n.a, axis);
    case NodeKind::Neg:
    case NodeKind::Call: return depends(*n.a, axis);
    default: return depends(*n.a, axis) || depends(*n.b, axis);
  }
}

bool contains_grid(const Node& n) {
  switch (n.kind) {
    case NodeKind::Grid: return true;
    case NodeKind::Num:
    case NodeKind::Var:
    case NodeKind::Const: return false;
    case NodeKind::Neg:
    case NodeKind::Call:
    case NodeKind::TInt: return contains_grid(*n.a);
    default: return contains_grid(*n.a) || contains_grid(*n.b);
  }
}

}  // namespace

// ---------------------------------------------------------------- Expression

Expression::Expression() : root_(make_num(0.0)) {}

bool Expression::operator==(const Expression& o) const { return same(root_, o.root_); }

Expression Expression::number(double v) { return Expression(make_num(v)); }

Expression Expression::variable(int axis) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Var;
  n->var = axis;
  n->name = axis_name(axis);
  return Expression(n);
}

Expression Expression::constant(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Const;
  n->name = name;
  return Expression(n);
}

Expression Expression::grid(std::shared_ptr<const GridTable> g) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Grid;
  n->name = g->name();
  n->grid = std::move(g);
  return Expression(n);
}

Expression Expression::call(Func f, const Expression& a) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->fn = f;
  n->a = a.ptr();
  return Expression(n);
}

Expression Expression::tint(const Expression& g, double t0, double abs_tol, double rel_tol) {
  if (g.is_zero()) return number(0.0);
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::TInt;
  n->a = g.ptr();
  n->t0 = t0;
  n->abs_tol = abs_tol;
  n->rel_tol = rel_tol;
  return Expression(n);
}

bool Expression::depends_on(int axis) const { return depends(*root_, axis); }

bool Expression::is_number(double* v) const {
  if (root_->kind == NodeKind::Num) {
    if (v) *v = root_->num;
    return true;
  }
  return false;
}

bool Expression::has_grid() const { return contains_grid(*root_); }

void Expression::collect_constants(std::set<std::string>& out) const {
  std::vector<const Node*> st{root_.get()};
  while (!st.empty()) {
    const Node* n = st.back();
    st.pop_back();
    if (n->kind == NodeKind::Const) out.insert(n->name);
    if (n->a) st.push_back(n->a.get());
    if (n->b) st.push_back(n->b.get());
  }
}

void Expression::collect_grids(GridRegistry& out) const {
  std::vector<const Node*> st{root_.get()};
  while (!st.empty()) {
    const Node* n = st.back();
    st.pop_back();
    if (n->kind == NodeKind::Grid) out[n->name] = n->grid;
    if (n->a) st.push_back(n->a.get());
    if (n->b) st.push_back(n->b.get());
  }
}

Expression operator+(const Expression& a, const Expression& b) {
  double x, y;
  if (a.is_number(&x) && b.is_number(&y)) return Expression::number(x + y);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expression(make(NodeKind::Add, a.ptr(), b.ptr()));
}

Expression operator-(const Expression& a, const Expression& b) {
  double x, y;
  if (a.is_number(&x) && b.is_number(&y)) return Expression::number(x - y);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expression(make(NodeKind::Sub, a.ptr(), b.ptr()));
}

Expression operator*(const Expression& a, const Expression& b) {
  double x, y;
  if (a.is_number(&x) && b.is_number(&y)) return Expression::number(x * y);
  if (a.is_zero() || b.is_zero()) return Expression::number(0.0);
  if (a.is_number(&x) && x == 1.0) return b;
  if (b.is_number(&y) && y == 1.0) return a;
  return Expression(make(NodeKind::Mul, a.ptr(), b.ptr()));
}

Expression operator/(const Expression& a, const Expression& b) {
  double y;
  if (a.is_zero() && !b.is_zero()) return Expression::number(0.0);
  if (b.is_number(&y) && y == 1.0) return a;
  return Expression(make(NodeKind::Div, a.ptr(), b.ptr()));
}

Expression operator-(const Expression& a) {
  double x;
  if (a.is_number(&x)) return Expression::number(-x);
  if (a.root().kind == NodeKind::Neg) return Expression(a.root().a);
  return Expression(make(NodeKind::Neg, a.ptr()));
}

Expression pow(const Expression& a, const Expression& b) {
  double y;
  if (b.is_number(&y)) {
    if (y == 0.0) return Expression::number(1.0);
    if (y == 1.0) return a;
  }
  return Expression(make(NodeKind::Pow, a.ptr(), b.ptr()));
}

Expression parse(const std::string& source, const Constants& constants, const ParseOptions& opts) {
  Parser p(source, constants, opts);
  return p.run();
}

std::string unparse(const Expression& e) {
  std::string out;
  emit(e.root(), out);
  return out;
}

Jet2 eval_jet(const Expression& e, const Point& p, const Constants& c, double* quad_err) {
  return eval_node<Jet2>(e.root(), Ctx{p, c, quad_err});
}

double eval_value(const Expression& e, const Point& p, const Constants& c, double* quad_err) {
  return eval_node<double>(e.root(), Ctx{p, c, quad_err});
}

// ---------------------------------------------------------------- calculus

Expression diff(const Expression& e, int axis) {
  const Node& n = e.root();
  if (!e.depends_on(axis)) return Expression::number(0.0);
  auto A = [&] { return Expression(n.a); };
  auto B = [&] { return Expression(n.b); };
  switch (n.kind) {
    case NodeKind::Num:
    case NodeKind::Const: return Expression::number(0.0);
    case NodeKind::Var: return Expression::number(n.var == axis ? 1.0 : 0.0);
    case NodeKind::Neg: return -diff(A(), axis);
    case NodeKind::Add: return diff(A(), axis) + diff(B(), axis);
    case NodeKind::Sub: return diff(A(), axis) - diff(B(), axis);
    case NodeKind::Mul: return diff(A(), axis) * B() + A() * diff(B(), axis);
    case NodeKind::Div:
      return (diff(A(), axis) * B() - A() * diff(B(), axis)) / pow(B(), Expression::number(2.0));
    case NodeKind::Pow: {
      Expression u = A(), v = B();
      if (!v.depends_on(X1) && !v.depends_on(X2) && !v.depends_on(T) && !v.depends_on(Y) && !v.has_grid()) {
        return v * pow(u, v - Expression::number(1.0)) * diff(u, axis);
      }
      Expression lnu = Expression::call(Func::Ln, u);
      return e * (diff(v, axis) * lnu + v * diff(u, axis) / u);
    }
    case NodeKind::Call: {
      Expression u = A(), du = diff(u, axis);
      Expression d;
      switch (n.fn) {
        case Func::Sin: d = Expression::call(Func::Cos, u); break;
        case Func::Cos: d = -Expression::call(Func::Sin, u); break;
        case Func::Tan:
          d = Expression::number(1.0) / pow(Expression::call(Func::Cos, u), Expression::number(2.0));
          break;
        case Func::Exp: d = e; break;
        case Func::Ln: d = Expression::number(1.0) / u; break;
        case Func::Sqrt: d = Expression::number(0.5) / e; break;
        case Func::Abs: d = u / e; break;
        case Func::Tanh: d = Expression::number(1.0) - pow(e, Expression::number(2.0)); break;
        case Func::Sinh: d = Expression::call(Func::Cosh, u); break;
        case Func::Cosh: d = Expression::call(Func::Sinh, u); break;
      }
      return d * du;
    }
    case NodeKind::TInt:
      if (axis == T) return A();
      return Expression::tint(diff(A(), axis), n.t0, n.abs_tol, n.rel_tol);
    case NodeKind::Grid:
      fail(ErrorKind::Precondition, "symbolic derivative of tabulated field '" + n.name + "' is not available");
  }
  return Expression::number(0.0);
}

Expression substitute(const Expression& e, int axis, double value) {
  const Node& n = e.root();
  if (!e.depends_on(axis)) return e;
  switch (n.kind) {
    case NodeKind::Var: return Expression::number(value);
    case NodeKind::Neg: return -substitute(Expression(n.a), axis, value);
    case NodeKind::Call: return Expression::call(n.fn, substitute(Expression(n.a), axis, value));
    case NodeKind::TInt:
      if (axis == T) fail(ErrorKind::Precondition, "cannot substitute t inside tint");
      return Expression::tint(substitute(Expression(n.a), axis, value), n.t0, n.abs_tol, n.rel_tol);
    case NodeKind::Grid:
      fail(ErrorKind::Precondition, "cannot substitute into tabulated field '" + n.name + "'");
    default: break;
  }
  Expression a = substitute(Expression(n.a), axis, value), b = substitute(Expression(n.b), axis, value);
  switch (n.kind) {
    case NodeKind::Add: return a + b;
    case NodeKind::Sub: return a - b;
    case NodeKind::Mul: return a * b;
    case NodeKind::Div: return a / b;
    case NodeKind::Pow: return pow(a, b);
    default: return e;
  }
}

}  // namespace anholo
