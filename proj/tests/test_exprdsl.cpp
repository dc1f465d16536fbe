#include <cmath>

#include <gtest/gtest.h>

#include "anholo/error.hpp"
#include "anholo/expr.hpp"
#include "anholo/field.hpp"
#include "support/random_fields.hpp"

using namespace anholo;

namespace {

const Point P0{0.3, -0.7, 1.2, 0.4};

double val(const std::string& s, const Point& p = P0, const Constants& c = {}) { return eval_value(parse(s, c), p, c); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

std::string message_of(const std::string& src) {
  try {
    parse(src, {});
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ExprParse, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(val("1 + 2*3"), 7);
  EXPECT_DOUBLE_EQ(val("-2^2"), -4);
  EXPECT_DOUBLE_EQ(val("2^3^2"), 512);
  EXPECT_DOUBLE_EQ(val("2^-1"), 0.5);
  EXPECT_DOUBLE_EQ(val("8/4/2"), 1);
  EXPECT_DOUBLE_EQ(val("7 - 2 - 1"), 4);
  EXPECT_DOUBLE_EQ(val("1.5e2 + .5"), 150.5);
}

TEST(ExprParse, VariablesAndConstants) {
  Constants c{{"H", 2.0}};
  EXPECT_DOUBLE_EQ(val("x1 + 10*x2 + 100*t + 1000*y"), 0.3 - 7 + 120 + 400);
  EXPECT_DOUBLE_EQ(val("H*t", P0, c), 2.4);
}

TEST(ExprParse, ErrorsCarryKindAndColumn) {
  EXPECT_EQ(kind_of([] { parse("1 + ", {}); }), ErrorKind::Syntax);
  EXPECT_NE(message_of("1 + ").find("column 5"), std::string::npos);
  EXPECT_NE(message_of("x1 $ 2").find("column 4"), std::string::npos);
  EXPECT_EQ(kind_of([] { parse("(x1 + 2", {}); }), ErrorKind::Syntax);
  EXPECT_EQ(kind_of([] { parse("", {}); }), ErrorKind::Syntax);
  EXPECT_EQ(kind_of([] { parse("foo + 1", {}); }), ErrorKind::UnknownIdentifier);
  EXPECT_NE(message_of("t + foo").find("column 5"), std::string::npos);
  EXPECT_EQ(kind_of([] { parse("bar(x1)", {}); }), ErrorKind::UnknownIdentifier);
  EXPECT_EQ(kind_of([] { parse("sin(x1, x2)", {}); }), ErrorKind::Arity);
  EXPECT_EQ(kind_of([] { parse("sin()", {}); }), ErrorKind::Arity);
  EXPECT_EQ(kind_of([] { parse("1e+", {}); }), ErrorKind::Syntax);
}

TEST(ExprParse, TintNeedsExtensions) {
  EXPECT_EQ(kind_of([] { parse("tint(t, 0)", {}); }), ErrorKind::UnknownIdentifier);
  ParseOptions o;
  o.extensions = true;
  Expression e = parse("tint(t, 0)", {}, o);
  EXPECT_NEAR(eval_value(e, Point{0, 0, 2, 0}, {}), 2.0, 1e-10);
}

TEST(ExprEval, DomainErrors) {
  EXPECT_EQ(kind_of([] { val("ln(x2)"); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { val("sqrt(x2)"); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { val("1/(x1 - 0.3)"); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { val("x2^0.5"); }), ErrorKind::Domain);
  EXPECT_EQ(kind_of([] { val("exp(1000)"); }), ErrorKind::Overflow);
  // integer powers of negative bases are fine
  EXPECT_DOUBLE_EQ(val("x2^3"), std::pow(-0.7, 3));
}

TEST(ExprEval, JetOfProductAndChainRule) {
  Expression e = parse("sin(x1*t) * exp(x2)", {});
  Jet2 j = eval_jet(e, P0, {});
  const double x = P0[0], z = P0[1], t = P0[2];
  EXPECT_NEAR(j.v, std::sin(x * t) * std::exp(z), 1e-15);
  EXPECT_NEAR(j.d(X1), t * std::cos(x * t) * std::exp(z), 1e-14);
  EXPECT_NEAR(j.d(T), x * std::cos(x * t) * std::exp(z), 1e-14);
  EXPECT_NEAR(j.dd(X1, T), (std::cos(x * t) - x * t * std::sin(x * t)) * std::exp(z), 1e-14);
  EXPECT_NEAR(j.dd(X1, X1), -t * t * std::sin(x * t) * std::exp(z), 1e-14);
  EXPECT_DOUBLE_EQ(j.d(Y), 0);
}

TEST(ExprEval, JetMatchesSymbolicDiff) {
  fixtures::ExprGen gen(5);
  const Constants& c = fixtures::test_constants();
  for (int k = 0; k < 50; ++k) {
    Expression e = parse(gen.gen(3), c);
    Point p{gen.uni(-1, 1), gen.uni(-1, 1), gen.uni(-1, 1), gen.uni(-1, 1)};
    Jet2 j = eval_jet(e, p, c);
    for (int a = 0; a < 4; ++a) {
      Expression da = diff(e, a);
      Jet2 dj = eval_jet(da, p, c);
      EXPECT_NEAR(dj.v, j.d(a), 1e-9 * std::max(1.0, std::fabs(j.d(a)))) << unparse(e);
      for (int b = 0; b < 4; ++b) EXPECT_NEAR(dj.d(b), j.dd(a, b), 1e-8 * std::max(1.0, std::fabs(j.dd(a, b))));
    }
  }
}

// Property: dual-number partials agree with sixth-order central differences.
TEST(ExprEval, FiniteDifferenceOracle200) {
  fixtures::ExprGen gen(2024);
  const Constants& c = fixtures::test_constants();
  int done = 0;
  while (done < 200) {
    Expression e = parse(gen.gen(3), c);
    Point p{gen.uni(-1, 1), gen.uni(-1, 1), gen.uni(-1, 1), gen.uni(-1, 1)};
    Jet2 j;
    try {
      j = eval_jet(e, p, c);
    } catch (const Error&) {
      continue;
    }
    fixtures::FdOracle fd{e, c};
    for (int a = 0; a < 4; ++a) {
      double r = fd.d1(p, a);
      ASSERT_NEAR(j.d(a), r, 1e-6 * std::max(1.0, std::fabs(r))) << unparse(e);
      for (int b = a; b < 4; ++b) {
        double r2 = fd.d2(p, a, b);
        ASSERT_NEAR(j.dd(a, b), r2, 1e-4 * std::max(1.0, std::fabs(r2))) << unparse(e);
      }
    }
    ++done;
  }
}

TEST(ExprUnparse, RoundTripIsStructural) {
  fixtures::ExprGen gen(11);
  const Constants& c = fixtures::test_constants();
  for (int k = 0; k < 200; ++k) {
    Expression e = parse(gen.gen(4), c);
    Expression back = parse(unparse(e), c);
    EXPECT_TRUE(back == e) << unparse(e);
    EXPECT_EQ(unparse(back), unparse(e));
  }
  for (const char* s : {"-2^2", "(-2)^2", "2^3^2", "(2^3)^2", "a - (b - c)", "a/(b*c)", "-(x1 + t)"}) {
    Constants abc{{"a", 1}, {"b", 2}, {"c", 3}};
    Expression e = parse(s, abc);
    EXPECT_TRUE(parse(unparse(e), abc) == e) << s << " -> " << unparse(e);
  }
}

TEST(ExprEval, Deterministic) {
  fixtures::ExprGen g1(3), g2(3);
  for (int k = 0; k < 20; ++k) {
    std::string a = g1.gen(3), b = g2.gen(3);
    ASSERT_EQ(a, b);
    Jet2 ja = eval_jet(parse(a, fixtures::test_constants()), P0, fixtures::test_constants());
    Jet2 jb = eval_jet(parse(b, fixtures::test_constants()), P0, fixtures::test_constants());
    EXPECT_EQ(ja.v, jb.v);
    EXPECT_EQ(ja.h, jb.h);
  }
}

TEST(ExprCalculus, DependsAndSubstitute) {
  Expression e = parse("x1*t + y", {});
  EXPECT_TRUE(e.depends_on(X1));
  EXPECT_FALSE(e.depends_on(X2));
  Expression s = substitute(e, T, 2.0);
  EXPECT_FALSE(s.depends_on(T));
  EXPECT_DOUBLE_EQ(eval_value(s, P0, {}), 2 * P0[0] + P0[3]);
  EXPECT_TRUE(diff(parse("x2^2", {}), X1).is_zero());
}

TEST(ExprCalculus, TintQuadrature) {
  // int_1^t s^2 ds = (t^3 - 1)/3 with x-dependence carried through
  Expression e = Expression::tint(parse("x1*t^2", {}), 1.0);
  Point p{2.0, 0, 1.7, 0};
  double err = 0;
  Jet2 j = eval_jet(e, p, {}, &err);
  EXPECT_NEAR(j.v, 2 * (std::pow(1.7, 3) - 1) / 3, 1e-9);
  EXPECT_NEAR(j.d(T), 2 * 1.7 * 1.7, 1e-12);
  EXPECT_NEAR(j.d(X1), (std::pow(1.7, 3) - 1) / 3, 1e-9);
  EXPECT_LT(err, 1e-9);
}

TEST(ScalarFieldOps, ArithmeticAndConstants) {
  ScalarField a = ScalarField::from_text("k*x1", {{"k", 2.0}});
  ScalarField b = ScalarField::from_text("t", {});
  ScalarField c = a * b + ScalarField::constant(1);
  EXPECT_DOUBLE_EQ(c.value(P0), 2 * 0.3 * 1.2 + 1);
  EXPECT_EQ(kind_of([] { merge_constants({{"k", 1.0}}, {{"k", 2.0}}); }), ErrorKind::Precondition);
}
