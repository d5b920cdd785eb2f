#include "elldiff/diffmod.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <map>
#include <numeric>
#include <sstream>

namespace elldiff {

namespace {

long checked_pow(long base, int e) {
  long out = 1;
  for (int k = 0; k < e; ++k) {
    if (__builtin_mul_overflow(out, base, &out)) throw DomainError("operator scale overflows");
  }
  return out;
}

bool is_gauss_int(const Scalar& s) { return s.re().get_den() == 1 && s.im().get_den() == 1; }

/// All Gaussian integers g with N(g) dividing N(c), filtered to actual divisors of c.
std::vector<Scalar> gaussian_divisors(const Scalar& c) {
  Integer norm = c.re().get_num() * c.re().get_num() + c.im().get_num() * c.im().get_num();
  if (norm > Integer("10000000000")) throw DomainError("eigenvalue search bound exceeded");
  unsigned long n = norm.get_ui();
  std::vector<unsigned long> divisors;
  for (unsigned long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    divisors.push_back(d);
    if (d * d != n) divisors.push_back(n / d);
  }
  std::vector<Scalar> out;
  for (unsigned long d : divisors) {
    for (unsigned long a = 0; a * a <= d; ++a) {
      unsigned long rest = d - a * a;
      auto b = static_cast<unsigned long>(std::llround(std::sqrt(static_cast<double>(rest))));
      while (b * b > rest) --b;
      while ((b + 1) * (b + 1) <= rest) ++b;
      if (b * b != rest) continue;
      for (long sa : {1L, -1L}) {
        if (a == 0 && sa < 0) continue;
        for (long sb : {1L, -1L}) {
          if (b == 0 && sb < 0) continue;
          Scalar g(Rational(sa * static_cast<long>(a)), Rational(sb * static_cast<long>(b)));
          if (is_gauss_int(c / g)) out.push_back(g);
        }
      }
    }
  }
  return out;
}

bool contains(const std::vector<Scalar>& v, const Scalar& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

/// p monic with Q(i) coefficients becomes y^n + ... with Gaussian integer
/// coefficients under x = y / D.
std::pair<SPoly, Integer> integral_monic(const SPoly& p) {
  SPoly m = p.monic();
  Integer D = 1;
  for (const Scalar& c : m.coeffs()) {
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.re().get_den_mpz_t());
    mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), c.im().get_den_mpz_t());
  }
  std::vector<Scalar> out(m.coeffs());
  Rational scale = 1;
  for (int k = m.degree(); k >= 0; --k) {
    out[static_cast<std::size_t>(k)] *= Scalar(scale);
    scale *= Rational(D);
  }
  return {SPoly(std::move(out)), D};
}

/// Gaussian integers near the complex roots of q.
std::vector<Scalar> numeric_candidates(const SPoly& q) {
  const int n = q.degree();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    const Scalar& c = q.coeff(i);
    C(i, n - 1) = -std::complex<double>(c.re().get_d(), c.im().get_d());
  }
  std::vector<Scalar> out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  for (const auto& z : es.eigenvalues()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e15) continue;
    auto re = static_cast<long>(std::llround(z.real()));
    auto im = static_cast<long>(std::llround(z.imag()));
    for (long dr = -1; dr <= 1; ++dr)
      for (long di = -1; di <= 1; ++di) out.emplace_back(Rational(re + dr), Rational(im + di));
  }
  return out;
}

struct RootSearch {
  std::vector<Scalar> roots;
  /// False when the divisor bound forced a numeric search.
  bool complete = true;
};

RootSearch find_roots(const SPoly& p0) {
  if (p0.is_zero()) throw DomainError("the zero polynomial has every root");
  RootSearch out;
  std::vector<Scalar> cs = p0.monic().coeffs();
  std::size_t shift = 0;
  while (shift < cs.size() && cs[shift].is_zero()) ++shift;
  if (shift > 0) out.roots.emplace_back(0);
  SPoly p(std::vector<Scalar>(cs.begin() + static_cast<std::ptrdiff_t>(shift), cs.end()));
  if (p.degree() < 1) return out;
  p = SPoly::exact_div(p, SPoly::gcd(p, p.derivative()));
  auto [q, D] = integral_monic(p);
  std::vector<Scalar> candidates;
  try {
    candidates = gaussian_divisors(q.coeff(0));
  } catch (const DomainError&) {
    candidates = numeric_candidates(q);
    out.complete = false;
  }
  Scalar inv(Rational(1) / Rational(D));
  for (const Scalar& g : candidates) {
    if (!q.eval(g).is_zero()) continue;
    Scalar x = g * inv;
    if (!contains(out.roots, x)) out.roots.push_back(x);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Scalar& a, const Scalar& b) { return lex_less(a, b); });
  return out;
}

/// A monic quadratic factor of a root-free quartic, if one exists.
std::optional<SPoly> quadratic_factor(const SPoly& quartic) {
  auto [q, D] = integral_monic(quartic);
  const Scalar p3 = q.coeff(3), p2 = q.coeff(2), p1 = q.coeff(1), p0 = q.coeff(0);
  for (const Scalar& b : gaussian_divisors(p0)) {
    Scalar d = p0 / b;
    std::vector<Scalar> as;
    if (d != b) {
      Scalar a = (p1 - b * p3) / (d - b);
      if (is_gauss_int(a)) as.push_back(a);
    } else if (p1 == b * p3) {
      as = find_roots(SPoly(std::vector<Scalar>{p2 - Scalar(2) * b, -p3, Scalar(1)})).roots;
    }
    for (const Scalar& a : as) {
      Scalar c = p3 - a;
      if (p2 == b + d + a * c && p1 == a * d + b * c) {
        Rational Dq(D);
        return SPoly(std::vector<Scalar>{b / Scalar(Dq * Dq), a / Scalar(Dq), Scalar(1)});
      }
    }
  }
  return std::nullopt;
}

/// A factor of a root-free polynomial, certified irreducible when possible.
NeedsExtension name_factor(const SPoly& f, bool complete) {
  SPoly m = f.monic();
  SPoly sq = SPoly::exact_div(m, SPoly::gcd(m, m.derivative()));
  if (!complete) return {sq, false};
  if (sq.degree() <= 3) return {sq, true};
  if (sq.degree() == 4) {
    try {
      if (auto g = quadratic_factor(sq)) return {*g, true};
      return {sq, true};
    } catch (const DomainError&) {
      return {sq, false};
    }
  }
  return {sq, false};
}

/// C with N C = B N, for N of full column rank with B-stable column span.
SMat restrict_to(const SMat& B, const SMat& N) {
  const Eigen::Index n = N.rows(), k = N.cols();
  SMat aug(n, 2 * k);
  aug.leftCols(k) = N;
  aug.rightCols(k) = matmul<Scalar>(B, N);
  rref<Scalar>(aug);
  return aug.block(0, k, k, k);
}

SVec normalized(SVec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i).is_zero()) continue;
    Scalar inv = v(i).inverse();
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) *= inv;
    break;
  }
  return v;
}

bool is_eigen(const SMat& M, const SVec& v) {
  SVec w = matmul<Scalar>(M, SMat(v)).col(0);
  Eigen::Index k = 0;
  while (k < v.size() && v(k).is_zero()) ++k;
  if (k == v.size()) return false;
  Scalar lambda = w(k) / v(k);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (w(i) != lambda * v(i)) return false;
  return true;
}

/// delta described on a coarser lattice, if it is periodic there.
std::optional<PeriodicFn> coarsen(const PeriodicFn& f, const ScaleLattice& base) {
  std::map<PointC, Rational> vals;
  for (const auto& [pt, v] : f.reps()) vals.emplace(base.reduce(pt), v);
  PeriodicFn out(base);
  for (const auto& [pt, v] : vals) out.add(pt, v);
  if (out != f) return std::nullopt;
  return out;
}

std::optional<PointXY> locate(const PointC& pt, const PointLabels& labels, long q, const ScaleLattice& lat) {
  PointC target = lat.reduce(pt);
  for (const auto& [lp, xy] : labels) {
    if (lat.reduce(lp) == target) return xy;
    if (lat.reduce(lp.scaled(-1)) == target) return ec_neg(xy);
  }
  // q-multiples of labelled points
  for (const auto& [lp, xy] : labels) {
    std::vector<PointC> seen{lat.reduce(lp)};
    PointC w = lp;
    PointXY img = xy;
    for (;;) {
      w = lat.reduce(w.scaled(q));
      img = ec_mul(img, q);
      if (std::find(seen.begin(), seen.end(), w) != seen.end()) break;
      seen.push_back(w);
      if (w == target) return img;
    }
  }
  return std::nullopt;
}

}  // namespace

DiffSystem DiffSystem::make(EMat A, long scale) {
  if (A.rows() != A.cols() || A.rows() == 0) throw DomainError("system matrix must be square and nonempty");
  if (scale < 2) throw DomainError("operator scale must be at least 2");
  CurveRef curve;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) curve = common_curve(curve, A(i, j).curve());
  if (determinant<EllFn>(A).is_zero()) throw DomainError("system matrix is singular");
  return DiffSystem{std::move(A), scale, std::move(curve)};
}

CompatPair CompatPair::make(DiffSystem phi, DiffSystem psi) {
  if (phi.A.rows() != psi.A.rows()) throw DomainError("compatible pair needs equal sizes");
  common_curve(phi.curve, psi.curve);
  if (std::gcd(phi.scale, psi.scale) != 1) throw DomainError("p and q must be coprime");
  return CompatPair{std::move(phi), std::move(psi)};
}

EMat pullback(const EMat& m, long factor) {
  if (factor < 1 || factor > std::numeric_limits<int>::max()) throw DomainError("pullback factor out of range");
  return map_entries(m, [&](const EllFn& f) { return pullback(f, static_cast<int>(factor)); });
}

DiffSystem companion(const std::vector<EllFn>& coeffs, long scale) {
  if (coeffs.size() < 2) throw DomainError("companion needs a_0 .. a_n with n >= 1");
  if (coeffs.front().is_zero() || coeffs.back().is_zero()) throw DomainError("companion needs a_0 a_n != 0");
  const auto n = static_cast<Eigen::Index>(coeffs.size()) - 1;
  EMat A = zeros<EllFn>(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) A(i, i + 1) = EllFn(1);
  for (Eigen::Index j = 0; j < n; ++j) A(n - 1, j) = -coeffs[static_cast<std::size_t>(n - j)] / coeffs.front();
  return DiffSystem::make(std::move(A), scale);
}

DiffSystem gauge(const DiffSystem& A, const EMat& P) {
  if (P.rows() != A.A.rows() || P.cols() != A.A.cols()) throw DomainError("gauge matrix has the wrong shape");
  if (determinant<EllFn>(P).is_zero()) throw DomainError("gauge matrix is singular");
  EMat out = matmul<EllFn>(matmul<EllFn>(inverse<EllFn>(pullback(P, A.scale)), A.A), P);
  return DiffSystem::make(std::move(out), A.scale);
}

DiffSystem iterate_system(const DiffSystem& A, int t) {
  if (t < 1) throw DomainError("iterate_system needs t >= 1");
  EMat out = A.A;
  for (int k = 1; k < t; ++k) out = matmul<EllFn>(pullback(A.A, checked_pow(A.scale, k)), out);
  return DiffSystem{std::move(out), checked_pow(A.scale, t), A.curve};
}

EMat tau_step(const EMat& P, const DiffSystem& A) {
  if (P.rows() != A.A.cols()) throw DomainError("tau_step: shapes do not match");
  return matmul<EllFn>(inverse<EllFn>(A.A), pullback(P, A.scale));
}

bool isomonodromy_check(const CompatPair& pair) {
  EMat lhs = matmul<EllFn>(pullback(pair.psi.A, pair.phi.scale), pair.phi.A);
  EMat rhs = matmul<EllFn>(pullback(pair.phi.A, pair.psi.scale), pair.psi.A);
  return mat_equal<EllFn>(lhs, rhs);
}

HResult h_matrix(const LMat& U, const DiffSystem& A_psi, long p) {
  if (p != A_psi.scale) throw DomainError("h_matrix: p differs from the scale of A_psi");
  if (U.rows() != U.cols() || U.rows() != A_psi.A.rows()) throw DomainError("h_matrix: shapes do not match");
  int T = kExact;
  for (Eigen::Index i = 0; i < U.rows(); ++i)
    for (Eigen::Index j = 0; j < U.cols(); ++j) T = std::min(T, U(i, j).trunc());
  if (T == kExact) throw DomainError("h_matrix needs a truncated fundamental matrix");
  LMat Up = map_entries(U, [&](const LaurentSeries& s) { return scale_arg(s, p); });
  LMat H = matmul<LaurentSeries>(matmul<LaurentSeries>(series_inverse(Up), embed_matrix(A_psi.A, T)), U);

  HConstant out{SMat(H.rows(), H.cols()), kExact};
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
      const LaurentSeries& s = H(i, j);
      if (s.trunc() <= 0) throw DomainError("h_matrix: truncation too low to decide constancy");
      out.order = std::min(out.order, s.trunc());
      out.h(i, j) = Scalar(0);
      if (s.is_zero()) continue;
      for (int n = s.val(); n < s.stored_end(); ++n) {
        if (n == 0 || s.coeff(n).is_zero()) continue;
        return HNotConstant{i, j, n};
      }
      out.h(i, j) = s.val() <= 0 ? s.coeff(0) : Scalar(0);
    }
  }
  return out;
}

PvExample pv_example_system(const CurveRef& curve, long m, int order) {
  if (m < 2) throw DomainError("pv_example_system needs m >= 2");
  EMat A(2, 2);
  A(0, 0) = EllFn(Scalar(m), curve);
  A(0, 1) = g_element(curve, static_cast<int>(m));
  A(1, 0) = EllFn(Scalar(0), curve);
  A(1, 1) = EllFn(Scalar(1), curve);
  LMat U(2, 2);
  U(0, 0) = LaurentSeries::z();
  U(0, 1) = weierstrass_series(*curve, WKind::Zeta, order);
  U(1, 0) = LaurentSeries(0L);
  U(1, 1) = LaurentSeries(1L);
  PvExample out{DiffSystem::make(std::move(A), m), std::move(U)};
  if (!verify_system(embed_matrix(out.A.A, order), out.U, m).passed)
    throw std::logic_error("zeta fails the example system");
  return out;
}

VerdictOrderOne order_one_verdict(const PeriodicFn& alpha, const std::optional<EllFn>& a, const PointLabels& labels,
                                  long q) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (a) {
    if (a->is_zero()) throw DomainError("a must be nonzero");
    if (Rational(ord_at_origin(*a)) != alpha.at(PointC())) throw DomainError("alpha differs from div(a) at 0");
    for (const auto& [lp, xy] : labels) {
      if (Rational(ord_at_point(*a, xy)) != alpha.at(lp)) {
        std::ostringstream msg;
        msg << "alpha differs from div(a) at " << lp;
        throw DomainError(msg.str());
      }
    }
  }
  VerdictOrderOne v;
  if (sgn(alpha.at(PointC())) != 0) {
    v.kind = VerdictKind::PsiTranscendental;
    v.reason = VerdictReason::Ord0;
    return v;
  }
  if (!alpha.is_torsion()) {
    v.reason = VerdictReason::InconclusiveBounds;
    v.note = "descent search covers torsion support only";
    return v;
  }
  DescentResult d = descent_solve(alpha, q);
  if (auto* nd = std::get_if<NoDescent>(&d)) {
    v.kind = VerdictKind::PsiTranscendental;
    v.reason = VerdictReason::NoDescentOrbit;
    v.orbit = nd->orbit;
    return v;
  }
  const auto& sol = std::get<DescentSolution>(d);
  if (scale_periodic(sol.delta, q) - sol.delta != alpha) throw std::logic_error("descent certificate fails");
  v.kind = VerdictKind::Descends;
  v.delta = sol.delta;
  if (!a) return v;

  ScaleLattice base(1);
  auto d1 = coarsen(sol.delta, base);
  if (!d1 || !fundamental_sums(*d1).weighted_in(base)) {
    v.note = "b lives on a proper sublattice and is not materialized";
    return v;
  }
  CurveRef curve = a->curve();
  if (!curve && !labels.empty()) curve = labels.front().second.curve();
  if (!curve) {
    if (!d1->is_zero()) {
      v.note = "no curve available to materialize b";
      return v;
    }
    v.b = EllFn(1);
    v.c = ell_is_constant(*a);
    return v;
  }
  std::vector<std::pair<PointXY, int>> divisor;
  for (const auto& [pt, val] : d1->reps()) {
    if (val.get_den() != 1) {
      v.note = "delta has non-integral values";
      return v;
    }
    auto xy = pt.is_zero() ? std::optional<PointXY>(PointXY::infinity(curve)) : locate(pt, labels, q, base);
    if (!xy) {
      std::ostringstream msg;
      msg << "no coordinates for " << pt;
      v.note = msg.str();
      return v;
    }
    divisor.emplace_back(*xy, static_cast<int>(val.get_num().get_si()));
  }
  EllFn b = function_from_divisor(divisor);
  auto c = ell_is_constant(*a * b / pullback(b, static_cast<int>(q)));
  if (!c) throw DomainError("labels are inconsistent with the group law: a b / phi(b) is not constant");
  v.b = b;
  v.c = c;
  return v;
}

SPoly char_poly(const SMat& A) {
  if (A.rows() != A.cols()) throw DomainError("char_poly needs a square matrix");
  const Eigen::Index n = A.rows();
  std::vector<Scalar> c(static_cast<std::size_t>(n) + 1, Scalar(0));
  c[static_cast<std::size_t>(n)] = Scalar(1);
  SMat M = zeros<Scalar>(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    M = matmul<Scalar>(A, M);
    for (Eigen::Index i = 0; i < n; ++i) M(i, i) += c[static_cast<std::size_t>(n - k + 1)];
    SMat AM = matmul<Scalar>(A, M);
    Scalar tr(0);
    for (Eigen::Index i = 0; i < n; ++i) tr += AM(i, i);
    c[static_cast<std::size_t>(n - k)] = -tr / Scalar(static_cast<long>(k));
  }
  return SPoly(std::move(c));
}

std::vector<Scalar> gaussian_roots(const SPoly& p) { return find_roots(p).roots; }

EigenResult common_eigenvector(const SMat& A, const SMat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() == 0)
    throw DomainError("common_eigenvector needs square matrices of one size");
  if (!mat_equal<Scalar>(matmul<Scalar>(A, B), matmul<Scalar>(B, A))) throw DomainError("A and B do not commute");
  const Eigen::Index n = A.rows();
  std::optional<SPoly> leftover;
  RootSearch lambdas = find_roots(char_poly(A));
  bool complete = lambdas.complete;
  for (const Scalar& lambda : lambdas.roots) {
    SMat V = nullspace<Scalar>(A - identity<Scalar>(n) * lambda);
    SMat C = restrict_to(B, V);
    RootSearch mus_search = find_roots(char_poly(C));
    const std::vector<Scalar>& mus = mus_search.roots;
    if (mus.empty()) {
      if (!leftover) {
        leftover = char_poly(C);
        complete = lambdas.complete && mus_search.complete;
      }
      continue;
    }
    SMat W = nullspace<Scalar>(C - identity<Scalar>(C.rows()) * mus.front());
    SVec v = normalized(matmul<Scalar>(V, SMat(W.col(0))).col(0));
    if (!is_eigen(A, v) || !is_eigen(B, v)) throw std::logic_error("common eigenvector fails to verify");
    return v;
  }
  return name_factor(leftover ? *leftover : char_poly(A), complete);
}

}  // namespace elldiff
