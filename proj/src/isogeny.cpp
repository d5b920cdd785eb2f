#include "elldiff/isogeny.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <tuple>

#include "elldiff/laurent.hpp"

namespace elldiff {

ShortCurve ShortCurve::from_params(const CurveParams& c) { return {-c.g2 / Scalar(4), -c.g3 / Scalar(4)}; }

CurveParams ShortCurve::to_params() const { return {-A * Scalar(4), -B * Scalar(4)}; }

SPoly ShortCurve::rhs() const { return SPoly(std::vector<Scalar>{B, A, Scalar(0), Scalar(1)}); }

namespace {

YPoly ymul(const YPoly& a, const YPoly& b, const SPoly& r) {
  if (a.p.is_zero() || b.p.is_zero()) return {};
  YPoly out{a.p * b.p, a.e + b.e};
  if (out.e == 2) {
    out.p *= r;
    out.e = 0;
  }
  return out;
}

YPoly ysub(const YPoly& a, const YPoly& b) {
  if (b.p.is_zero()) return a;
  if (a.p.is_zero()) return {-b.p, b.e};
  if (a.e != b.e) throw std::logic_error("division polynomial parity mismatch");
  YPoly out{a.p - b.p, a.e};
  if (out.p.is_zero()) out.e = 0;
  return out;
}

/// a / (2Y)
YPoly ydiv2y(const YPoly& a, const SPoly& r) {
  Scalar half(Rational(1, 2));
  if (a.p.is_zero()) return {};
  if (a.e == 1) return {a.p.scaled(half), 0};
  return {SPoly::exact_div(a.p, r).scaled(half), 1};
}

YPoly ycube(const YPoly& a, const SPoly& r) { return ymul(ymul(a, a, r), a, r); }
YPoly ysquare(const YPoly& a, const SPoly& r) { return ymul(a, a, r); }

}  // namespace

DivPolySeq division_polys(const CurveParams& curve, int m) {
  if (m < 1) throw DomainError("division polynomials need m >= 1");
  ShortCurve sc = ShortCurve::from_params(curve);
  const Scalar& A = sc.A;
  const Scalar& B = sc.B;
  SPoly r = sc.rhs();
  DivPolySeq out{sc, {}};
  auto& psi = out.psi;
  int top = std::max(m, 4);
  psi.resize(static_cast<std::size_t>(top) + 1);
  psi[0] = {};
  psi[1] = {SPoly(Scalar(1)), 0};
  psi[2] = {SPoly(Scalar(2)), 1};
  psi[3] = {SPoly(std::vector<Scalar>{-A * A, Scalar(12) * B, Scalar(6) * A, Scalar(0), Scalar(3)}), 0};
  psi[4] = {SPoly(std::vector<Scalar>{Scalar(-8) * B * B - A * A * A, Scalar(-4) * A * B, Scalar(-5) * A * A,
                                      Scalar(20) * B, Scalar(5) * A, Scalar(0), Scalar(1)})
                .scaled(Scalar(4)),
            1};
  auto P = [&](int k) -> const YPoly& { return psi[static_cast<std::size_t>(k)]; };
  for (int n = 5; n <= top; ++n) {
    int k = n / 2;
    YPoly v;
    if (n % 2 == 1) {
      v = ysub(ymul(P(k + 2), ycube(P(k), r), r), ymul(P(k - 1), ycube(P(k + 1), r), r));
    } else {
      YPoly inner = ysub(ymul(P(k + 2), ysquare(P(k - 1), r), r), ymul(P(k - 2), ysquare(P(k + 1), r), r));
      v = ydiv2y(ymul(P(k), inner, r), r);
    }
    psi[static_cast<std::size_t>(n)] = std::move(v);
  }
  psi.resize(static_cast<std::size_t>(m) + 1);
  return out;
}

namespace {

MulMap compute_mul_map(const CurveParams& curve, int m) {
  if (m == 1) return {SRatFn::x(), SRatFn(Scalar(1))};
  DivPolySeq seq = division_polys(curve, m + 2);
  SPoly r = seq.curve.rhs();
  auto P = [&](int k) -> const YPoly& { return seq.psi[static_cast<std::size_t>(k)]; };
  YPoly num = ymul(P(m - 1), P(m + 1), r);
  YPoly den = ysquare(P(m), r);
  SRatFn x_m = SRatFn::x() - SRatFn(num.p, den.p);
  YPoly big = ysub(ymul(P(m + 2), ysquare(P(m - 1), r), r), ymul(P(m - 2), ysquare(P(m + 1), r), r));
  YPoly n = ydiv2y(big, r);
  YPoly d = ycube(P(m), r);
  SRatFn w;
  Scalar half(Rational(1, 2));
  if (n.e == 1 && d.e == 0) {
    w = SRatFn(n.p, d.p.scaled(Scalar(2)));
  } else if (n.e == 0 && d.e == 1) {
    w = SRatFn(n.p, d.p.scaled(Scalar(2)) * r);
  } else {
    throw std::logic_error("y o [m] has the wrong parity");
  }
  return {x_m, w};
}

struct MapCache {
  std::shared_mutex mu;
  std::map<std::tuple<std::string, std::string, int>, MulMap> entries;
};

MapCache& map_cache() {
  static MapCache cache;
  return cache;
}

}  // namespace

MulMap multiplication_map(const CurveParams& curve, int m) {
  if (m < 1) throw DomainError("multiplication map needs m >= 1");
  auto key = std::make_tuple(to_string(curve.g2), to_string(curve.g3), m);
  MapCache& cache = map_cache();
  {
    std::shared_lock lock(cache.mu);
    auto it = cache.entries.find(key);
    if (it != cache.entries.end()) return it->second;
  }
  MulMap mm = compute_mul_map(curve, m);
  std::unique_lock lock(cache.mu);
  return cache.entries.emplace(key, std::move(mm)).first->second;
}

EllFn pullback(const EllFn& f, int m) {
  if (m < 1) throw DomainError("pullback needs m >= 1");
  if (m == 1 || !f.curve()) return f;
  MulMap mm = multiplication_map(*f.curve(), m);
  SRatFn a = f.a().compose(mm.x_m);
  SRatFn b = f.b().is_zero() ? SRatFn() : f.b().compose(mm.x_m) * mm.w_m;
  return {a, b, f.curve()};
}

EllFn division_function(const CurveRef& curve, int m) {
  if (!curve) throw DomainError("division function needs a curve");
  DivPolySeq seq = division_polys(*curve, m);
  const YPoly& p = seq.psi.back();
  Scalar sign = m % 2 == 1 ? Scalar(1) : Scalar(-1);
  if (p.e == 0) return {SRatFn(p.p.scaled(sign)), SRatFn(), curve};
  return {SRatFn(), SRatFn(p.p.scaled(sign * Scalar(Rational(1, 2)))), curve};
}

EllFn g_element(const CurveRef& curve, int m) {
  if (m < 2) throw DomainError("g_m needs m >= 2");
  EllFn psi = division_function(curve, m);
  EllFn g = ell_derive(psi) / psi * EllFn(Scalar(Rational(1, m)));
  const int check = 16;
  LaurentSeries zeta = weierstrass_series(*curve, WKind::Zeta, check);
  LaurentSeries expect = scale_arg(zeta, m) - zeta.scaled(Scalar(m));
  if (!(embed(g, check) - expect).is_zero()) throw std::logic_error("g_m failed its series certificate");
  return g;
}

PointXY PointXY::infinity(CurveRef curve) {
  PointXY p;
  p.curve_ = std::move(curve);
  return p;
}

PointXY::PointXY(CurveRef curve, Scalar x, Scalar y)
    : inf_(false), x_(std::move(x)), y_(std::move(y)), curve_(std::move(curve)) {
  if (!curve_) throw DomainError("point needs a curve");
  if (!curve_->contains(x_, y_)) throw DomainError("point (" + to_string(x_) + ", " + to_string(y_) + ") is not on the curve");
}

PointXY ec_neg(const PointXY& p) {
  if (p.is_infinity()) return p;
  return {p.curve(), p.x(), -p.y()};
}

PointXY ec_add(const PointXY& p, const PointXY& q) {
  CurveRef c = common_curve(p.curve(), q.curve());
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  Scalar lambda;
  if (p.x() == q.x()) {
    if (p.y() == -q.y()) return PointXY::infinity(c);
    lambda = (Scalar(12) * p.x() * p.x() - c->g2) / (Scalar(2) * p.y());
  } else {
    lambda = (q.y() - p.y()) / (q.x() - p.x());
  }
  Scalar x3 = lambda * lambda / Scalar(4) - p.x() - q.x();
  Scalar y3 = -(p.y() + lambda * (x3 - p.x()));
  return {c, x3, y3};
}

PointXY ec_mul(const PointXY& p, long n) {
  PointXY base = n < 0 ? ec_neg(p) : p;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  PointXY acc = PointXY::infinity(p.curve());
  while (k) {
    if (k & 1UL) acc = ec_add(acc, base);
    base = ec_add(base, base);
    k >>= 1U;
  }
  return acc;
}

int ord_at_point(const EllFn& f, const PointXY& p) {
  if (p.is_infinity()) return ord_at_origin(f);
  const CurveRef& c = p.curve();
  EllFn x = EllFn::x(c);
  EllFn y = EllFn::y(c);
  EllFn lambda = (y - EllFn(p.y())) / (x - EllFn(p.x()));
  EllFn x3 = lambda * lambda * EllFn(Scalar(Rational(1, 4))) - x - EllFn(p.x());
  EllFn y3 = -(EllFn(p.y()) + lambda * (x3 - EllFn(p.x())));
  return ord_at_origin(substitute(f, x3, y3));
}

EllFn function_from_divisor(const std::vector<std::pair<PointXY, int>>& divisor) {
  if (divisor.empty()) return EllFn(1);
  CurveRef c;
  for (const auto& [p, n] : divisor) c = common_curve(c, p.curve());
  // combine repeated points
  std::vector<std::pair<PointXY, int>> support;
  for (const auto& [p, n] : divisor) {
    auto it = std::find_if(support.begin(), support.end(), [&](const auto& e) { return e.first == p; });
    if (it == support.end()) {
      support.emplace_back(p, n);
    } else {
      it->second += n;
    }
  }
  long degree = 0;
  PointXY sum = PointXY::infinity(c);
  for (const auto& [p, n] : support) {
    degree += n;
    sum = ec_add(sum, ec_mul(p, n));
  }
  if (degree != 0) throw DomainError("divisor has nonzero degree " + std::to_string(degree));
  if (!sum.is_infinity()) throw DomainError("divisor points do not sum to O (Abel-Jacobi condition fails)");

  EllFn x = EllFn::x(c);
  EllFn y = EllFn::y(c);
  EllFn f(1);
  PointXY s = PointXY::infinity(c);
  // multiplies f by l_{S,P} / v_{S+P}, whose divisor is (S) + (P) - (S+P) - (O)
  auto step = [&](const PointXY& p) {
    if (p.is_infinity() || s.is_infinity()) {
      s = ec_add(s, p);
      return;
    }
    PointXY r = ec_add(s, p);
    EllFn line;
    if (s.x() == p.x() && s.y() == -p.y()) {
      line = x - EllFn(s.x());
    } else {
      Scalar lambda = s == p ? (Scalar(12) * p.x() * p.x() - c->g2) / (Scalar(2) * p.y())
                             : (p.y() - s.y()) / (p.x() - s.x());
      line = y - EllFn(s.y()) - EllFn(lambda) * (x - EllFn(s.x()));
    }
    f *= line;
    if (!r.is_infinity()) f /= x - EllFn(r.x());
    s = r;
  };
  for (const auto& [p, n] : support) {
    if (p.is_infinity()) continue;
    for (int k = 0; k < std::abs(n); ++k) {
      if (n > 0) {
        step(p);
      } else {
        step(ec_neg(p));
        f /= x - EllFn(p.x());
      }
    }
  }
  if (!s.is_infinity()) throw std::logic_error("divisor construction did not close");

  // certificate: orders on the support and the norm down to C(x)
  SRatFn expect_norm(Scalar(1));
  bool has_inf = false;
  for (const auto& [p, n] : support) {
    if (p.is_infinity()) has_inf = true;
    if (ord_at_point(f, p) != n) throw std::logic_error("constructed function has the wrong order at a support point");
    if (!p.is_infinity() && n != 0) {
      SRatFn lin(SPoly(std::vector<Scalar>{-p.x(), Scalar(1)}));
      for (int k = 0; k < std::abs(n); ++k) expect_norm = n > 0 ? expect_norm * lin : expect_norm / lin;
    }
  }
  if (!has_inf && ord_at_origin(f) != 0) throw std::logic_error("constructed function has a stray zero or pole at O");
  if (!(f.norm() / expect_norm).constant_value()) throw std::logic_error("constructed function has stray zeros or poles");
  return f;
}

}  // namespace elldiff
