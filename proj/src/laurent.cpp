#include "elldiff/laurent.hpp"

#include <algorithm>

namespace elldiff {

namespace {

LaurentSeries horner(const SPoly& p, const LaurentSeries& w) {
  if (p.is_zero()) return {};
  LaurentSeries acc(p.lead());
  for (int k = p.degree() - 1; k >= 0; --k) {
    acc = acc * w;
    if (!p.coeff(k).is_zero()) acc += LaurentSeries(p.coeff(k));
  }
  return acc;
}

}  // namespace

LaurentSeries embed(const EllFn& f, int order) {
  if (f.is_zero()) return LaurentSeries::zero(order);
  if (auto c = f.constant_value()) return LaurentSeries(*c).truncated(order);
  int rel = order - ord_at_origin(f);
  if (rel <= 0) return LaurentSeries::zero(order);
  const CurveParams& curve = *f.curve();
  // wp has valuation -2, so truncating at rel - 2 keeps rel significant terms
  LaurentSeries wp = weierstrass_series(curve, WKind::Wp, std::max(rel - 2, 8));
  auto part = [&](const SRatFn& r) {
    LaurentSeries num = horner(r.num(), wp);
    if (r.is_polynomial()) return num;
    return num / horner(r.den(), wp);
  };
  LaurentSeries out = LaurentSeries::zero(order);
  if (!f.a().is_zero()) out += part(f.a());
  if (!f.b().is_zero()) {
    LaurentSeries wpp = weierstrass_series(curve, WKind::WpPrime, std::max(rel - 3, 8));
    out += part(f.b()) * wpp;
  }
  return out.truncated(order);
}

LMat embed_matrix(const EMat& m, int order) {
  return map_entries(m, [order](const EllFn& f) { return embed(f, order); });
}

LMat series_inverse(const LMat& m) { return inverse<LaurentSeries>(m); }

void SElement::add(int i, int j, const EllFn& k) {
  if (j < 0 || j > max_zeta_pow) throw DomainError("zeta power outside the declared range");
  if (k.is_zero()) return;
  curve = common_curve(curve, k.curve());
  auto key = std::make_pair(i, j);
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, k);
    return;
  }
  it->second += k;
  if (it->second.is_zero()) terms.erase(it);
}

LaurentSeries embed_S(const SElement& s, int order) {
  LaurentSeries out = LaurentSeries::zero(order);
  for (const auto& [key, k] : s.terms) {
    auto [i, j] = key;
    int vk = ord_at_origin(k);
    int rel = order - (vk + i - j);
    if (rel <= 0) continue;
    LaurentSeries term = embed(k, vk + rel);
    if (j > 0) {
      if (!s.curve) throw DomainError("zeta terms need a curve");
      LaurentSeries zeta = weierstrass_series(*s.curve, WKind::Zeta, std::max(rel - 1, 8));
      for (int e = 0; e < j; ++e) term *= zeta;
    }
    out += term.shifted(i).truncated(order);
  }
  return out;
}

namespace {

/// x^a y^e basis of the functions with a pole of order <= P at 0 only.
struct BasisFn {
  int a;
  bool y;
};

std::vector<BasisFn> pole_basis(int max_pole) {
  std::vector<BasisFn> out{{0, false}};
  for (int n = 2; n <= max_pole; ++n) {
    out.push_back(n % 2 == 0 ? BasisFn{n / 2, false} : BasisFn{(n - 3) / 2, true});
  }
  return out;
}

struct Layout {
  std::vector<BasisFn> basis;
  int I;
  int J;
  int index(std::size_t k, int i, int j) const {
    return (static_cast<int>(k) * (2 * I + 1) + (i + I)) * (J + 1) + j;
  }
  int dim() const { return static_cast<int>(basis.size()) * (2 * I + 1) * (J + 1); }
};

struct ModOutcome {
  bool inconsistent = false;
  std::vector<Integer> re;
  std::vector<Integer> im;
};

template <std::uint64_t P>
ModOutcome membership_mod(const LaurentSeries& f, const CurveParams& curve, const Layout& lay, int low, int T) {
  using F = ModP<P>;
  int dim = lay.dim();
  int rows = T - low;
  int pmax = 0;
  for (const auto& b : lay.basis) pmax = std::max(pmax, 2 * b.a + (b.y ? 3 : 0));
  int t0 = T + 2 * pmax + lay.I + 2 * lay.J + 12;
  std::vector<F> sol[2];
  for (int e = 0; e < 2; ++e) {
    bool conj = e == 1;
    F g2 = F::from_scalar(curve.g2, conj);
    F g3 = F::from_scalar(curve.g3, conj);
    Series<F> wp = weierstrass_series<F>(g2, g3, WKind::Wp, t0);
    Series<F> wpp = weierstrass_series<F>(g2, g3, WKind::WpPrime, t0);
    Series<F> zeta = weierstrass_series<F>(g2, g3, WKind::Zeta, t0);
    std::vector<Series<F>> xp{Series<F>(F(1L))};
    std::vector<Series<F>> bs;
    for (const auto& b : lay.basis) {
      while (static_cast<int>(xp.size()) <= b.a) xp.push_back(xp.back() * wp);
      const Series<F>& p = xp[static_cast<std::size_t>(b.a)];
      bs.push_back(b.y ? p * wpp : p);
    }
    std::vector<Series<F>> zp{Series<F>(F(1L))};
    for (int j = 1; j <= lay.J; ++j) zp.push_back(zp.back() * zeta);
    Mat<F> m(rows, dim + 1);
    for (std::size_t k = 0; k < bs.size(); ++k) {
      for (int j = 0; j <= lay.J; ++j) {
        Series<F> bz = bs[k] * zp[static_cast<std::size_t>(j)];
        for (int i = -lay.I; i <= lay.I; ++i) {
          Series<F> col = bz.shifted(i);
          if (col.trunc() < T) throw DomainError("internal precision shortfall in membership test");
          int c = lay.index(k, i, j);
          for (int n = low; n < T; ++n) m(n - low, c) = col.coeff(n);
        }
      }
    }
    for (int n = low; n < T; ++n) m(n - low, dim) = F::from_scalar(f.coeff(n), conj);
    auto pivots = rref(m);
    if (!pivots.empty() && pivots.back() == dim) return {true, {}, {}};
    std::vector<F> x(static_cast<std::size_t>(dim), F(0L));
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      x[static_cast<std::size_t>(pivots[r])] = m(static_cast<Eigen::Index>(r), dim);
    }
    sol[e] = std::move(x);
  }
  ModOutcome out;
  F inv2 = F(2L).inverse();
  F inv2i = (F(2L) * F::sqrt_minus_one()).inverse();
  for (int c = 0; c < dim; ++c) {
    auto cu = static_cast<std::size_t>(c);
    out.re.emplace_back(static_cast<unsigned long>(((sol[0][cu] + sol[1][cu]) * inv2).value()));
    out.im.emplace_back(static_cast<unsigned long>(((sol[0][cu] - sol[1][cu]) * inv2i).value()));
  }
  return out;
}

void crt_merge(std::vector<Integer>& acc, Integer& modulus, const std::vector<Integer>& r, std::uint64_t p) {
  Integer pz(static_cast<unsigned long>(p));
  if (acc.empty()) {
    acc = r;
    modulus = pz;
    return;
  }
  Integer minv;
  Integer mmod = modulus % pz;
  mpz_invert(minv.get_mpz_t(), mmod.get_mpz_t(), pz.get_mpz_t());
  for (std::size_t k = 0; k < acc.size(); ++k) {
    Integer t = ((r[k] - acc[k]) % pz) * minv % pz;
    if (t < 0) t += pz;
    acc[k] += modulus * t;
  }
  modulus *= pz;
}

}  // namespace

int membership_dimension(const MembershipBounds& b) {
  Layout lay{pole_basis(b.max_pole_order), b.max_z_range, b.max_zeta_pow};
  return lay.dim();
}

std::optional<SElement> s_membership(const LaurentSeries& f, const CurveRef& curve, const MembershipBounds& bounds) {
  if (!curve) throw DomainError("membership test needs a curve");
  if (bounds.max_zeta_pow < 0 || bounds.max_z_range < 0 || bounds.max_pole_order < 0) {
    throw DomainError("membership bounds must be nonnegative");
  }
  Layout lay{pole_basis(bounds.max_pole_order), bounds.max_z_range, bounds.max_zeta_pow};
  int dim = lay.dim();
  int T = f.trunc();
  if (f.is_exact()) T = std::max(dim + 10, f.is_zero() ? 0 : f.stored_end());
  if (T < dim + 10) {
    throw DomainError("series truncated at z^" + std::to_string(T) + " but the bounds need at least z^" +
                      std::to_string(dim + 10));
  }
  int deepest = -bounds.max_pole_order - bounds.max_z_range - bounds.max_zeta_pow;
  int low = f.is_zero() ? deepest : std::min(deepest, f.val());

  std::vector<Integer> re, im;
  Integer modulus;
  auto attempt = [&](const ModOutcome& o, std::uint64_t p) -> std::optional<SElement> {
    crt_merge(re, modulus, o.re, p);
    Integer dummy;
    crt_merge(im, dummy, o.im, p);
    std::vector<Scalar> coeffs;
    for (std::size_t k = 0; k < re.size(); ++k) {
      auto a = rational_reconstruct(re[k], modulus);
      auto b = rational_reconstruct(im[k], modulus);
      if (!a || !b) return std::nullopt;
      coeffs.emplace_back(*a, *b);
    }
    SElement cand;
    cand.curve = curve;
    cand.max_zeta_pow = bounds.max_zeta_pow;
    for (int i = -lay.I; i <= lay.I; ++i) {
      for (int j = 0; j <= lay.J; ++j) {
        std::vector<Scalar> a_part, b_part;
        for (std::size_t k = 0; k < lay.basis.size(); ++k) {
          const Scalar& c = coeffs[static_cast<std::size_t>(lay.index(k, i, j))];
          if (c.is_zero()) continue;
          auto& dst = lay.basis[k].y ? b_part : a_part;
          auto deg = static_cast<std::size_t>(lay.basis[k].a);
          if (dst.size() <= deg) dst.resize(deg + 1, Scalar(0));
          dst[deg] = c;
        }
        EllFn kfun(SRatFn(SPoly(a_part)), SRatFn(SPoly(b_part)), curve);
        cand.add(i, j, kfun);
      }
    }
    LaurentSeries back = embed_S(cand, T);
    if ((back - f.truncated(T)).is_zero()) return cand;
    return std::nullopt;
  };

  // Every prime is tried under both embeddings of Q(i); an inconsistent
  // reduction is a proof that no exact solution exists.
  auto run = [&](auto prime_tag) -> std::optional<std::optional<SElement>> {
    constexpr std::uint64_t P = decltype(prime_tag)::value;
    ModOutcome o;
    try {
      o = membership_mod<P>(f, *curve, lay, low, T);
    } catch (const DomainError&) {
      return std::nullopt;  // bad reduction
    }
    if (o.inconsistent) return std::optional<SElement>();
    auto c = attempt(o, P);
    if (c) return c;
    return std::nullopt;
  };
  using P0 = std::integral_constant<std::uint64_t, kPrime0>;
  using P1 = std::integral_constant<std::uint64_t, kPrime1>;
  using P2 = std::integral_constant<std::uint64_t, kPrime2>;
  using P3 = std::integral_constant<std::uint64_t, kPrime3>;
  if (auto r = run(P0{})) return *r;
  if (auto r = run(P1{})) return *r;
  if (auto r = run(P2{})) return *r;
  if (auto r = run(P3{})) return *r;
  throw DomainError("membership candidate could not be certified");
}

namespace {

/// n with q^n = a, if any.
std::optional<int> power_index(const Scalar& a, long q) {
  if (!a.is_real() || sgn(a.re()) <= 0) return std::nullopt;
  Integer num = a.re().get_num();
  Integer den = a.re().get_den();
  auto log_q = [q](Integer v) -> std::optional<int> {
    int n = 0;
    while (v > 1) {
      if (v % q != 0) return std::nullopt;
      v /= q;
      ++n;
    }
    return n;
  };
  if (den == 1) return log_q(num);
  if (num == 1) {
    auto n = log_q(den);
    if (n) return -*n;
  }
  return std::nullopt;
}

Scalar q_power(long q, int n) {
  Rational p(1);
  Rational base = n >= 0 ? Rational(q) : Rational(1, q);
  for (int k = 0; k < std::abs(n); ++k) p *= base;
  return Scalar(p);
}

}  // namespace

ScalarSolve solve_scalar_first_order(const Scalar& a, const LaurentSeries& b, long q) {
  if (a.is_zero()) throw DomainError("the coefficient a must be nonzero");
  if (q < 2) throw DomainError("q must be at least 2");
  ScalarSolve out;
  std::optional<int> res = power_index(a, q);
  if (res && *res < b.trunc()) {
    out.resonances.push_back(*res);
    out.homogeneous_dim = 1;
    Scalar bn = (b.is_zero() || *res < b.val() || *res >= b.stored_end()) ? Scalar(0) : b.coeff(*res);
    if (!bn.is_zero()) {
      out.obstruction = *res;
      return out;
    }
  }
  if (b.is_zero()) {
    out.particular = b;
    return out;
  }
  std::vector<Scalar> u;
  for (int n = b.val(); n < b.stored_end(); ++n) {
    Scalar bn = b.coeff(n);
    if (bn.is_zero()) {
      u.emplace_back(0);
      continue;
    }
    u.push_back(bn / (q_power(q, n) - a));
  }
  out.particular = LaurentSeries(b.val(), b.trunc(), std::move(u));
  return out;
}

SystemCheck verify_system(const LMat& A, const LMat& U, long m) {
  if (A.rows() != A.cols() || A.cols() != U.rows()) throw DomainError("verify_system: incompatible shapes");
  LMat au = matmul(A, U);
  int order = kExact;
  int fail = kExact;
  bool ok = true;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
      LaurentSeries r = scale_arg(U(i, j), m) - au(i, j);
      if (r.is_zero()) {
        order = std::min(order, r.trunc());
      } else {
        ok = false;
        fail = std::min(fail, r.val());
      }
    }
  }
  return ok ? SystemCheck{true, order} : SystemCheck{false, fail};
}

RegularSolutions solve_system_regular(const LMat& A, long q, int order) {
  if (A.rows() != A.cols()) throw DomainError("solve_system_regular needs a square matrix");
  if (q < 2) throw DomainError("q must be at least 2");
  Eigen::Index n = A.rows();
  int T = order;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!A(i, j).is_zero() && A(i, j).val() < 0) {
        throw DomainError("A has a pole at 0; use verify_system for such systems");
      }
      T = std::min(T, A(i, j).trunc());
    }
  }
  std::vector<SMat> coef;
  for (int m = 0; m < T; ++m) {
    SMat c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const LaurentSeries& s = A(i, j);
        c(i, j) = (s.is_zero() || m < s.val() || m >= s.stored_end()) ? Scalar(0) : s.coeff(m);
      }
    coef.push_back(std::move(c));
  }
  if (T == 0 || determinant<Scalar>(coef[0]).is_zero()) {
    throw DomainError("A(0) is singular; use verify_system for such systems");
  }
  RegularSolutions out;
  // each partial solution keeps Y_0 .. Y_{n-1}
  std::vector<std::vector<SVec>> partial;
  for (int k = 0; k < T; ++k) {
    SMat lhs = identity<Scalar>(n) * q_power(q, k) - coef[0];
    Eigen::Index rk = rank<Scalar>(lhs);
    if (rk < n) out.resonances.push_back(k);
    std::vector<std::vector<SVec>> next;
    for (auto& y : partial) {
      SVec rhs = SVec::Constant(n, Scalar(0));
      for (int m = 1; m <= k; ++m) {
        SVec t = matmul<Scalar>(coef[static_cast<std::size_t>(m)], y[static_cast<std::size_t>(k - m)]);
        for (Eigen::Index i = 0; i < n; ++i) rhs(i) += t(i);
      }
      auto yk = solve<Scalar>(lhs, rhs);
      if (!yk) {
        out.obstructed_at.push_back(k);
        continue;
      }
      y.push_back(*yk);
      next.push_back(std::move(y));
    }
    if (rk < n) {
      SMat ker = nullspace<Scalar>(lhs);
      for (Eigen::Index c = 0; c < ker.cols(); ++c) {
        std::vector<SVec> y(static_cast<std::size_t>(k), SVec::Constant(n, Scalar(0)));
        y.push_back(ker.col(c));
        next.push_back(std::move(y));
      }
    }
    partial = std::move(next);
  }
  for (const auto& y : partial) {
    Vec<LaurentSeries> v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<Scalar> c;
      for (const auto& yk : y) c.push_back(yk(i));
      v(i) = LaurentSeries(0, T, std::move(c));
    }
    out.solutions.push_back(std::move(v));
  }
  return out;
}

}  // namespace elldiff
