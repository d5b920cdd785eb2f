#include "doctest.h"
#include "elldiff/series.hpp"
#include "elldiff/weierstrass.hpp"

using namespace elldiff;
using LS = Series<Scalar>;

TEST_CASE("series truncation bookkeeping") {
  LS z = LS::z();
  LS f(-1, 10, {Scalar(1), Scalar(0), Scalar(1)});  // z^-1 + z + O(z^10)
  CHECK(f.val() == -1);
  LS g = f * f;
  CHECK(g.val() == -2);
  CHECK(g.trunc() == 9);
  CHECK(g.coeff(0) == Scalar(2));
  LS inv = f.inverse();
  CHECK(inv.val() == 1);
  CHECK((f * inv).agrees_with(LS(Scalar(1))));
  CHECK(LS::zero(5).val() == 5);
  CHECK((f - f).is_zero());
  CHECK_THROWS_AS((f - f).inverse(), DomainError);
}

TEST_CASE("scale_arg examples") {
  LS f(-1, kExact, {Scalar(1), Scalar(0), Scalar(1)});
  LS g = f.scale_arg(Rational(2));
  CHECK(g.coeff(-1) == Scalar(Rational(1, 2)));
  CHECK(g.coeff(1) == Scalar(2));
  CHECK(f.scale_arg(Rational(1)) == f);
  LS h(-2, 20, {Scalar(1), Scalar(3), Scalar(0), Scalar(-1)});
  CHECK((h * f).scale_arg(Rational(3)) == h.scale_arg(Rational(3)) * f.scale_arg(Rational(3)));
  CHECK(h.scale_arg(Rational(2)).scale_arg(Rational(3)) == h.scale_arg(Rational(6)));
}

TEST_CASE("exp and integral") {
  LS z(1, 12, {Scalar(1)});
  LS e = z.exp();
  CHECK(e.coeff(3) == Scalar(Rational(1, 6)));
  CHECK(e.derivative().agrees_with(e));
  LS w(-2, 10, {Scalar(1), Scalar(0), Scalar(0), Scalar(5)});
  CHECK(w.integral().derivative().agrees_with(w));
  CHECK_THROWS_AS(LS(-1, 10, {Scalar(1)}).integral(), DomainError);
}

TEST_CASE("Weierstrass expansions") {
  CurveParams c(Scalar(4), Scalar(0));
  LS wp = weierstrass_series(c, WKind::Wp, 12);
  CHECK(wp.val() == -2);
  CHECK(wp.coeff(2) == Scalar(Rational(1, 5)));
  CHECK(wp.coeff(6) == Scalar(Rational(1, 75)));
  LS zeta = weierstrass_series(c, WKind::Zeta, 12);
  CHECK(zeta.coeff(-1) == Scalar(1));
  CHECK(zeta.coeff(3) == Scalar(Rational(-1, 15)));
  CHECK_THROWS_AS(weierstrass_series(c, WKind::Wp, 7), DomainError);
}

TEST_CASE("Weierstrass differential relations") {
  for (auto [g2, g3] : {std::pair{4, 0}, {0, 4}, {4, 4}, {1, 1}, {-4, 0}, {7, -3}}) {
    CurveParams c{Scalar(g2), Scalar(g3)};
    LS wp = weierstrass_series(c, WKind::Wp, 56);
    LS wpp = weierstrass_series(c, WKind::WpPrime, 56);
    LS zeta = weierstrass_series(c, WKind::Zeta, 56);
    LS sigma = weierstrass_series(c, WKind::Sigma, 56);
    LS res = wpp * wpp - LS(Scalar(4)) * wp * wp * wp + wp.scaled(Scalar(g2)) + LS(Scalar(g3));
    CHECK(res.is_zero());
    CHECK(res.trunc() >= 50);
    LS zr = zeta.derivative() + wp;
    CHECK(zr.is_zero());
    CHECK(zr.trunc() >= 50);
    LS sr = sigma.derivative() - zeta * sigma;
    CHECK(sr.is_zero());
    CHECK(sr.trunc() >= 50);
    CHECK(sigma.coeff(1) == Scalar(1));
    CHECK(sigma.coeff(2) == Scalar(0));
    CHECK(sigma.coeff(3) == Scalar(0));
    CHECK(sigma.coeff(4) == Scalar(0));
  }
}

TEST_CASE("zero invariants give the bare double pole") {
  LS wp = weierstrass_series<Scalar>(Scalar(0), Scalar(0), WKind::Wp, 20);
  CHECK(wp == LS(-2, 20, {Scalar(1)}));
}
