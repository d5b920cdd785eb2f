#pragma once

#include <memory>
#include <optional>
#include <ostream>

#include "elldiff/poly.hpp"
#include "elldiff/scalar.hpp"

namespace elldiff {

using SPoly = Poly<Scalar>;
using SRatFn = RatFn<Scalar>;

/// Invariants of the curve y^2 = 4x^3 - g2 x - g3.
struct CurveParams {
  Scalar g2;
  Scalar g3;

  CurveParams(Scalar g2_, Scalar g3_);

  Scalar discriminant() const;  // g2^3 - 27 g3^2
  /// 4x^3 - g2 x - g3
  SPoly cubic() const;
  bool contains(const Scalar& x, const Scalar& y) const;

  friend bool operator==(const CurveParams& a, const CurveParams& b) {
    return a.g2 == b.g2 && a.g3 == b.g3;
  }
  friend bool operator!=(const CurveParams& a, const CurveParams& b) { return !(a == b); }
};

using CurveRef = std::shared_ptr<const CurveParams>;

CurveRef make_curve(const Scalar& g2, const Scalar& g3);

/// Element a(x) + b(x) y of the function field C(x, y) of the curve, with x = wp
/// and y = wp'.  Constants may be curve-free; they adopt the curve of any
/// operand they are combined with.
class EllFn {
 public:
  EllFn() = default;
  EllFn(long c) : a_(Scalar(c)) {}                 // NOLINT(google-explicit-constructor)
  EllFn(int c) : a_(Scalar(c)) {}                  // NOLINT(google-explicit-constructor)
  EllFn(const Scalar& c) : a_(c) {}                // NOLINT(google-explicit-constructor)
  EllFn(const Scalar& c, CurveRef curve) : a_(c), curve_(std::move(curve)) {}
  EllFn(SRatFn a, SRatFn b, CurveRef curve);

  static EllFn x(CurveRef curve);
  static EllFn y(CurveRef curve);

  const SRatFn& a() const { return a_; }
  const SRatFn& b() const { return b_; }
  const CurveRef& curve() const { return curve_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  std::optional<Scalar> constant_value() const;

  EllFn conjugate() const;  // a - b y
  /// a^2 - b^2 (4x^3 - g2 x - g3), the norm down to C(x).
  SRatFn norm() const;
  EllFn inverse() const;

  friend EllFn operator+(const EllFn& l, const EllFn& r);
  friend EllFn operator-(const EllFn& l, const EllFn& r);
  friend EllFn operator*(const EllFn& l, const EllFn& r);
  friend EllFn operator/(const EllFn& l, const EllFn& r);
  friend EllFn operator-(const EllFn& f);
  EllFn& operator+=(const EllFn& o) { return *this = *this + o; }
  EllFn& operator-=(const EllFn& o) { return *this = *this - o; }
  EllFn& operator*=(const EllFn& o) { return *this = *this * o; }
  EllFn& operator/=(const EllFn& o) { return *this = *this / o; }

  /// Structural equality; curve-free constants compare equal to the same
  /// constant on any curve.
  friend bool operator==(const EllFn& l, const EllFn& r);
  friend bool operator!=(const EllFn& l, const EllFn& r) { return !(l == r); }

  friend std::ostream& operator<<(std::ostream& os, const EllFn& f);

 private:
  SRatFn a_;
  SRatFn b_;
  CurveRef curve_;
};

enum class ArithKind { Add, Sub, Mul, Div };

EllFn ell_arith(const EllFn& lhs, const EllFn& rhs, ArithKind kind);

/// d/dz, using dx/dz = y and dy/dz = 6x^2 - g2/2.
EllFn ell_derive(const EllFn& f);

std::optional<Scalar> ell_is_constant(const EllFn& f);

/// Order of f at z = 0 (the point at infinity of the curve): positive for a
/// zero, negative for a pole.  Throws for f = 0.
int ord_at_origin(const EllFn& f);

/// f(X, Y) for elements X, Y of the function field.
EllFn substitute(const EllFn& f, const EllFn& X, const EllFn& Y);

/// Shared curve of two operands, throwing on mismatch.
CurveRef common_curve(const CurveRef& a, const CurveRef& b);

}  // namespace elldiff
