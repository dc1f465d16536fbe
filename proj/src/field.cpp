#include "anholo/field.hpp"

#include "anholo/error.hpp"

namespace anholo {

namespace {
const std::shared_ptr<const Constants>& empty_constants() {
  static const auto e = std::make_shared<const Constants>();
  return e;
}
}  // namespace

ScalarField::ScalarField() : expr_(Expression::number(0.0)), consts_(empty_constants()) {}

ScalarField::ScalarField(Expression e, std::shared_ptr<const Constants> c)
    : expr_(std::move(e)), consts_(c ? std::move(c) : empty_constants()) {}

ScalarField ScalarField::constant(double v) { return ScalarField(Expression::number(v), empty_constants()); }

ScalarField ScalarField::from_text(const std::string& src, const Constants& c, const ParseOptions& opts) {
  auto cp = std::make_shared<const Constants>(c);
  return ScalarField(parse(src, *cp, opts), cp);
}

ScalarField ScalarField::from_grid(std::shared_ptr<const GridTable> g) {
  return ScalarField(Expression::grid(std::move(g)), empty_constants());
}

std::shared_ptr<const Constants> merge_constants(const Constants& a, const Constants& b) {
  if (b.empty()) return std::make_shared<const Constants>(a);
  Constants m = a;
  for (auto& [k, v] : b) {
    auto it = m.find(k);
    if (it != m.end() && it->second != v)
      fail(ErrorKind::Precondition, "constant '" + k + "' declared with two different values");
    m[k] = v;
  }
  return std::make_shared<const Constants>(std::move(m));
}

namespace {
std::shared_ptr<const Constants> join(const ScalarField& a, const ScalarField& b) {
  if (a.constants_ptr() == b.constants_ptr() || b.constants().empty()) return a.constants_ptr();
  if (a.constants().empty()) return b.constants_ptr();
  return merge_constants(a.constants(), b.constants());
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return {a.expr_ + b.expr_, join(a, b)}; }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return {a.expr_ - b.expr_, join(a, b)}; }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return {a.expr_ * b.expr_, join(a, b)}; }
ScalarField operator/(const ScalarField& a, const ScalarField& b) { return {a.expr_ / b.expr_, join(a, b)}; }
ScalarField operator-(const ScalarField& a) { return {-a.expr_, a.consts_}; }

ScalarField apply(Func f, const ScalarField& a) {
  return ScalarField(Expression::call(f, a.expr()), a.constants_ptr());
}

ScalarField pow(const ScalarField& a, double p) {
  return ScalarField(pow(a.expr(), Expression::number(p)), a.constants_ptr());
}

ScalarField tint(const ScalarField& g, double t0, double abs_tol, double rel_tol) {
  return ScalarField(Expression::tint(g.expr(), t0, abs_tol, rel_tol), g.constants_ptr());
}

}  // namespace anholo
