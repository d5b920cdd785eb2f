#pragma once

#include <utility>
#include <vector>

#include "elldiff/ellfn.hpp"

namespace elldiff {

/// Y^2 = X^3 + A X + B with X = x, y = 2Y.
struct ShortCurve {
  Scalar A;
  Scalar B;

  static ShortCurve from_params(const CurveParams& c);
  CurveParams to_params() const;
  /// X^3 + A X + B
  SPoly rhs() const;
};

/// p(X) * Y^e on the short curve, e in {0, 1}.
struct YPoly {
  SPoly p;
  int e = 0;

  friend bool operator==(const YPoly& a, const YPoly& b) { return a.e == b.e && a.p == b.p; }
};

struct DivPolySeq {
  ShortCurve curve;
  /// psi[k] for k = 0 .. m
  std::vector<YPoly> psi;
};

/// psi_0 .. psi_m by the standard recurrence on the short curve.
DivPolySeq division_polys(const CurveParams& curve, int m);

/// The multiplication-by-m map: x o [m] as a rational function of x and
/// y o [m] = w(x) y.
struct MulMap {
  SRatFn x_m;
  SRatFn w_m;
};

/// Memoized per (curve, m); safe to call concurrently.
MulMap multiplication_map(const CurveParams& curve, int m);

/// f(mz).
EllFn pullback(const EllFn& f, int m);

/// Psi_m = sigma(mz) / sigma(z)^(m^2) as an element of the function field.
EllFn division_function(const CurveRef& curve, int m);

/// g_m = zeta(mz) - m zeta(z).
EllFn g_element(const CurveRef& curve, int m);

class PointXY {
 public:
  static PointXY infinity(CurveRef curve);
  PointXY(CurveRef curve, Scalar x, Scalar y);

  bool is_infinity() const { return inf_; }
  const Scalar& x() const { return x_; }
  const Scalar& y() const { return y_; }
  const CurveRef& curve() const { return curve_; }

  friend bool operator==(const PointXY& a, const PointXY& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.x_ == b.x_ && a.y_ == b.y_;
  }
  friend bool operator!=(const PointXY& a, const PointXY& b) { return !(a == b); }

 private:
  PointXY() = default;
  bool inf_ = true;
  Scalar x_;
  Scalar y_;
  CurveRef curve_;
};

PointXY ec_neg(const PointXY& p);
PointXY ec_add(const PointXY& p, const PointXY& q);
PointXY ec_mul(const PointXY& p, long n);

/// ord_P(f), computed as the order at 0 of z -> f(z + P).
int ord_at_point(const EllFn& f, const PointXY& p);

/// b with div(b) equal to the given degree-zero divisor whose points sum to O.
EllFn function_from_divisor(const std::vector<std::pair<PointXY, int>>& divisor);

}  // namespace elldiff
