#include <random>

#include "doctest.h"
#include "elldiff/isogeny.hpp"
#include "elldiff/laurent.hpp"
#include "gen.hpp"

using namespace elldiff;
using LS = LaurentSeries;

namespace {
CurveRef curve40() { return make_curve(Scalar(4), Scalar(0)); }

LS zeta_scaled_diff(const CurveRef& c, int m, int order) {
  LS z = weierstrass_series(*c, WKind::Zeta, order);
  return scale_arg(z, m) - z.scaled(Scalar(m));
}
}  // namespace

TEST_CASE("short curve bridge") {
  CurveParams p(Scalar(Rational(3, 7)), Scalar(Rational(-2, 5), Rational(1)));
  ShortCurve s = ShortCurve::from_params(p);
  CHECK(s.to_params() == p);
  CHECK(s.A == Scalar(Rational(-3, 28)));
}

TEST_CASE("division polynomials") {
  CurveParams p(Scalar(Rational(1, 3)), Scalar(2));
  DivPolySeq d = division_polys(p, 6);
  const Scalar& A = d.curve.A;
  const Scalar& B = d.curve.B;
  CHECK(d.psi[1] == YPoly{SPoly(Scalar(1)), 0});
  CHECK(d.psi[2] == YPoly{SPoly(Scalar(2)), 1});
  CHECK(d.psi[3].p == SPoly(std::vector<Scalar>{-A * A, Scalar(12) * B, Scalar(6) * A, Scalar(0), Scalar(3)}));
  CHECK(d.psi[4].e == 1);
  CHECK(SPoly::divmod(d.psi[4].p, d.psi[2].p).second.is_zero());
  // degrees (m^2 - 1)/2 for odd m and (m^2 - 4)/2 for the X-part of even m
  CHECK(d.psi[5].p.degree() == 12);
  CHECK(d.psi[6].p.degree() == 16);
  CHECK(d.psi[5].p.lead() == Scalar(5));
  CHECK(d.psi[6].p.lead() == Scalar(6));
}

TEST_CASE("pullback basics") {
  CurveRef c = curve40();
  EllFn x = EllFn::x(c);
  EllFn y = EllFn::y(c);
  CHECK(pullback(x, 1) == x);
  CHECK_THROWS_AS(pullback(x, 0), DomainError);
  LS lhs = embed(pullback(x, 2), 40);
  LS rhs = scale_arg(embed(x, 40), 2);
  CHECK((lhs - rhs).is_zero());
  CHECK(lhs.trunc() == 40);
  CHECK((embed(pullback(y, 3), 40) - scale_arg(embed(y, 40), 3)).is_zero());
}

TEST_CASE("pullback commutes with the series embedding") {
  std::mt19937 rng(31);
  for (CurveRef c : {curve40(), make_curve(Scalar(Rational(-1, 2)), Scalar(Rational(3, 4)))}) {
    for (int m = 2; m <= 6; ++m) {
      for (int k = 0; k < 2; ++k) {
        EllFn f = testgen::rand_nonzero(rng, c);
        LS a = embed(pullback(f, m), 40);
        LS b = scale_arg(embed(f, 40), m);
        CHECK((a - b).is_zero());
        CHECK(std::min(a.trunc(), b.trunc()) == 40);
      }
    }
  }
}

TEST_CASE("pullback is multiplicative in m and a homomorphism") {
  std::mt19937 rng(32);
  CurveRef c = make_curve(Scalar(2), Scalar(Rational(1, 3)));
  for (int k = 0; k < 4; ++k) {
    EllFn f = testgen::rand_nonzero(rng, c);
    EllFn g = testgen::rand_nonzero(rng, c);
    CHECK(pullback(pullback(f, 2), 3) == pullback(f, 6));
    CHECK(pullback(f * g, 2) == pullback(f, 2) * pullback(g, 2));
    CHECK(pullback(f + g, 3) == pullback(f, 3) + pullback(g, 3));
  }
}

TEST_CASE("division function normalization") {
  CurveRef c = make_curve(Scalar(3), Scalar(-2));
  for (int m = 2; m <= 5; ++m) {
    LS s = embed(division_function(c, m), 6 - m * m);
    CHECK(s.val() == 1 - m * m);
    CHECK(s.lead() == Scalar(m));
    LS sigma = weierstrass_series(*c, WKind::Sigma, 30);
    LS inv = sigma.inverse();
    LS rhs = scale_arg(sigma, m);
    for (int k = 0; k < m * m; ++k) rhs *= inv;
    LS lhs = embed(division_function(c, m), 30 - m * m);
    CHECK(lhs.trunc() <= rhs.trunc());
    CHECK(lhs.agrees_with(rhs));
  }
}

TEST_CASE("g_m elements") {
  CurveRef c = curve40();
  EllFn g2 = g_element(c, 2);
  EllFn x = EllFn::x(c);
  EllFn y = EllFn::y(c);
  CHECK(g2 == (EllFn(6) * x * x - EllFn(2)) / (EllFn(2) * y));
  for (int m = 2; m <= 5; ++m) {
    EllFn g = g_element(c, m);
    LS s = embed(g, 40);
    CHECK(s.val() == -1);
    CHECK(s.lead() == Scalar(Rational(1, m)) - Scalar(m));
    CHECK((s - zeta_scaled_diff(c, m, 40)).is_zero());
  }
  CHECK_THROWS_AS(g_element(c, 1), DomainError);
}

TEST_CASE("g cocycle") {
  CurveRef c = make_curve(Scalar(1), Scalar(1));
  for (auto [m, n] : {std::pair{2, 3}, {3, 2}, {2, 2}}) {
    LS lhs = embed(pullback(g_element(c, m), n), 40) + embed(g_element(c, n), 40).scaled(Scalar(m));
    CHECK((lhs - zeta_scaled_diff(c, m * n, 40)).is_zero());
    CHECK(pullback(g_element(c, m), n) + g_element(c, n) * EllFn(m) == g_element(c, m * n));
  }
}

TEST_CASE("group law") {
  CurveRef c = curve40();
  PointXY O = PointXY::infinity(c);
  PointXY T(c, Scalar(0), Scalar(0));
  PointXY P(c, Scalar::i(), Scalar(Rational(2), Rational(-2)));
  CHECK(ec_add(P, O) == P);
  CHECK(ec_add(P, ec_neg(P)) == O);
  CHECK(ec_add(T, T) == O);
  CHECK(ec_mul(P, 4) == O);
  CHECK(ec_mul(P, 2) != O);
  CurveRef e = make_curve(Scalar(0), Scalar(-68));
  PointXY a(e, Scalar(-2), Scalar(6));
  PointXY b(e, Scalar(-1), Scalar(8));
  PointXY d = ec_mul(a, 2);
  CHECK(ec_add(ec_add(a, b), d) == ec_add(a, ec_add(b, d)));
  CHECK(ec_add(a, b) == ec_add(b, a));
  CHECK(ec_mul(a, 3) == ec_add(a, d));
  CHECK_THROWS_AS(PointXY(e, Scalar(1), Scalar(1)), DomainError);
}

TEST_CASE("function_from_divisor examples") {
  CurveRef c = curve40();
  PointXY O = PointXY::infinity(c);
  PointXY P(c, Scalar::i(), Scalar(Rational(2), Rational(-2)));
  EllFn f = function_from_divisor({{P, 1}, {ec_neg(P), 1}, {O, -2}});
  CHECK(f == EllFn::x(c) - EllFn(Scalar::i()));
  PointXY T(c, Scalar(0), Scalar(0));
  EllFn g = function_from_divisor({{T, 2}, {O, -2}});
  CHECK(ell_is_constant(g / EllFn::x(c)).has_value());
  CHECK(function_from_divisor({}) == EllFn(1));
  CHECK_THROWS_AS(function_from_divisor({{T, 1}}), DomainError);
  CHECK_THROWS_AS(function_from_divisor({{P, 1}, {O, -1}}), DomainError);
  CHECK(ord_at_point(g, T) == 2);
  CHECK(ord_at_point(g, O) == -2);
  CHECK(ord_at_point(g, P) == 0);
}

TEST_CASE("function_from_divisor round trip on random divisors") {
  std::mt19937 rng(41);
  CurveRef c = curve40();
  PointXY P(c, Scalar::i(), Scalar(Rational(2), Rational(-2)));
  PointXY T1(c, Scalar(1), Scalar(0));
  std::vector<PointXY> pool;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) {
      PointXY q = ec_add(ec_mul(P, a), ec_mul(T1, b));
      if (!q.is_infinity()) pool.push_back(q);
    }
  CurveRef e = make_curve(Scalar(0), Scalar(-68));
  PointXY a(e, Scalar(-2), Scalar(6));
  std::vector<PointXY> pool2{a, ec_neg(a), ec_mul(a, 2), PointXY(e, Scalar(-1), Scalar(8))};
  for (int trial = 0; trial < 30; ++trial) {
    const auto& pl = trial % 3 == 2 ? pool2 : pool;
    CurveRef cur = pl[0].curve();
    std::uniform_int_distribution<std::size_t> pick(0, pl.size() - 1);
    std::uniform_int_distribution<int> mult(-2, 2);
    std::vector<std::pair<PointXY, int>> div;
    PointXY sum = PointXY::infinity(cur);
    int deg = 0;
    for (int k = 0; k < 3; ++k) {
      PointXY q = pl[pick(rng)];
      int n = mult(rng);
      if (n == 0) continue;
      div.emplace_back(q, n);
      sum = ec_add(sum, ec_mul(q, n));
      deg += n;
    }
    if (!sum.is_infinity()) {
      div.emplace_back(ec_neg(sum), 1);
      deg += 1;
    }
    div.emplace_back(PointXY::infinity(cur), -deg);
    EllFn f = function_from_divisor(div);
    std::vector<std::pair<PointXY, int>> combined;
    for (const auto& [q, n] : div) {
      auto it = std::find_if(combined.begin(), combined.end(), [&](const auto& x) { return x.first == q; });
      if (it == combined.end()) combined.emplace_back(q, n);
      else it->second += n;
    }
    for (const auto& [q, n] : combined) CHECK(ord_at_point(f, q) == n);
  }
}
