#include "elldiff/ellfn.hpp"

#include <sstream>

namespace elldiff {

CurveParams::CurveParams(Scalar g2_, Scalar g3_) : g2(std::move(g2_)), g3(std::move(g3_)) {
  if (discriminant().is_zero()) {
    throw DomainError("singular curve: g2^3 - 27 g3^2 = 0");
  }
}

Scalar CurveParams::discriminant() const { return g2 * g2 * g2 - Scalar(27) * g3 * g3; }

SPoly CurveParams::cubic() const { return SPoly(std::vector<Scalar>{-g3, -g2, Scalar(0), Scalar(4)}); }

bool CurveParams::contains(const Scalar& x, const Scalar& y) const {
  return y * y == cubic().eval(x);
}

CurveRef make_curve(const Scalar& g2, const Scalar& g3) {
  return std::make_shared<const CurveParams>(g2, g3);
}

CurveRef common_curve(const CurveRef& a, const CurveRef& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (*a != *b) throw DomainError("operands live on different curves");
  return a;
}

EllFn::EllFn(SRatFn a, SRatFn b, CurveRef curve)
    : a_(std::move(a)), b_(std::move(b)), curve_(std::move(curve)) {
  if (!curve_ && (!b_.is_zero() || !a_.num().is_constant() || a_.den().degree() != 0)) {
    throw DomainError("non-constant elliptic function requires a curve");
  }
}

EllFn EllFn::x(CurveRef curve) { return {SRatFn::x(), SRatFn(), std::move(curve)}; }
EllFn EllFn::y(CurveRef curve) { return {SRatFn(), SRatFn(Scalar(1)), std::move(curve)}; }

std::optional<Scalar> EllFn::constant_value() const {
  if (!b_.is_zero()) return std::nullopt;
  return a_.constant_value();
}

EllFn EllFn::conjugate() const { return {a_, -b_, curve_}; }

SRatFn EllFn::norm() const {
  if (b_.is_zero()) return a_ * a_;
  return a_ * a_ - b_ * b_ * SRatFn(curve_->cubic());
}

EllFn EllFn::inverse() const {
  if (is_zero()) throw DomainError("division by zero in the function field");
  if (b_.is_zero()) return {a_.inverse(), SRatFn(), curve_};
  SRatFn n_inv = norm().inverse();
  return {a_ * n_inv, -b_ * n_inv, curve_};
}

EllFn operator+(const EllFn& l, const EllFn& r) {
  CurveRef c = common_curve(l.curve_, r.curve_);
  return {l.a_ + r.a_, l.b_ + r.b_, c};
}

EllFn operator-(const EllFn& l, const EllFn& r) {
  CurveRef c = common_curve(l.curve_, r.curve_);
  return {l.a_ - r.a_, l.b_ - r.b_, c};
}

EllFn operator-(const EllFn& f) { return {-f.a_, -f.b_, f.curve_}; }

EllFn operator*(const EllFn& l, const EllFn& r) {
  CurveRef c = common_curve(l.curve_, r.curve_);
  if (l.b_.is_zero() && r.b_.is_zero()) return {l.a_ * r.a_, SRatFn(), c};
  if (l.b_.is_zero()) return {l.a_ * r.a_, l.a_ * r.b_, c};
  if (r.b_.is_zero()) return {l.a_ * r.a_, l.b_ * r.a_, c};
  SRatFn a = l.a_ * r.a_ + l.b_ * r.b_ * SRatFn(c->cubic());
  SRatFn b = l.a_ * r.b_ + l.b_ * r.a_;
  return {std::move(a), std::move(b), c};
}

EllFn operator/(const EllFn& l, const EllFn& r) {
  common_curve(l.curve_, r.curve_);
  return l * r.inverse();
}

bool operator==(const EllFn& l, const EllFn& r) {
  if (l.curve_ && r.curve_ && l.curve_ != r.curve_ && *l.curve_ != *r.curve_) return false;
  return l.a_ == r.a_ && l.b_ == r.b_;
}

namespace {
void print_ratfn(std::ostream& os, const SRatFn& f) {
  auto print_poly = [&](const SPoly& p) {
    os << '(';
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
      if (p.coeff(k).is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << '(' << p.coeff(k) << ')';
      if (k > 0) os << "*x^" << k;
    }
    if (first) os << '0';
    os << ')';
  };
  print_poly(f.num());
  if (!f.is_polynomial()) {
    os << '/';
    print_poly(f.den());
  }
}
}  // namespace

std::ostream& operator<<(std::ostream& os, const EllFn& f) {
  print_ratfn(os, f.a_);
  if (!f.b_.is_zero()) {
    os << " + ";
    print_ratfn(os, f.b_);
    os << "*y";
  }
  return os;
}

EllFn ell_arith(const EllFn& lhs, const EllFn& rhs, ArithKind kind) {
  switch (kind) {
    case ArithKind::Add: return lhs + rhs;
    case ArithKind::Sub: return lhs - rhs;
    case ArithKind::Mul: return lhs * rhs;
    case ArithKind::Div: return lhs / rhs;
  }
  throw DomainError("unknown arithmetic kind");
}

EllFn ell_derive(const EllFn& f) {
  if (!f.curve()) return EllFn(0);
  const CurveParams& c = *f.curve();
  // d(a + b y) = b' y^2 + b (6x^2 - g2/2) + a' y
  SRatFn dy_dz(SPoly(std::vector<Scalar>{-c.g2 / Scalar(2), Scalar(0), Scalar(6)}));
  SRatFn a_part = f.b().derivative() * SRatFn(c.cubic()) + f.b() * dy_dz;
  return {a_part, f.a().derivative(), f.curve()};
}

std::optional<Scalar> ell_is_constant(const EllFn& f) { return f.constant_value(); }

int ord_at_origin(const EllFn& f) {
  if (f.is_zero()) throw DomainError("order of the zero function is undefined");
  // x has a double pole and y a triple pole; the two parts never cancel.
  std::optional<int> ord;
  if (!f.a().is_zero()) ord = -2 * f.a().degree();
  if (!f.b().is_zero()) {
    int ob = -2 * f.b().degree() - 3;
    ord = ord ? std::min(*ord, ob) : ob;
  }
  return *ord;
}

EllFn substitute(const EllFn& f, const EllFn& X, const EllFn& Y) {
  auto eval_poly = [&](const SPoly& p) {
    EllFn acc(0);
    for (int k = p.degree(); k >= 0; --k) acc = acc * X + EllFn(p.coeff(k));
    return acc;
  };
  auto eval_rat = [&](const SRatFn& r) {
    if (r.is_polynomial()) return eval_poly(r.num());
    return eval_poly(r.num()) / eval_poly(r.den());
  };
  EllFn out = eval_rat(f.a());
  if (!f.b().is_zero()) out += eval_rat(f.b()) * Y;
  return out;
}

}  // namespace elldiff
