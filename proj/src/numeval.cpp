#include "elldiff/numeval.hpp"

#include <cmath>
#include <numbers>

namespace elldiff::num {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);

/// w1 and tau = w2 / w1 with |tau| >= 1 and |Re tau| <= 1/2.
struct Reduced {
  Complex w1;
  Complex tau;
};

Reduced reduce_basis(const PeriodPair& L) {
  Complex b1 = L.w1, b2 = L.w2;
  for (int it = 0; it < 200; ++it) {
    double k = std::round((b2 / b1).real());
    b2 -= k * b1;
    if (std::abs(b2) < std::abs(b1) * (1.0 - 1e-15)) {
      Complex t = b1;
      b1 = b2;
      b2 = -t;
    } else {
      break;
    }
  }
  return {b1, b2 / b1};
}

/// cot(x), stable for large |Im x|.
Complex cot(Complex x) {
  if (x.imag() >= 0) {
    Complex w = std::exp(2.0 * kI * x);
    return kI * (w + 1.0) / (w - 1.0);
  }
  Complex w = std::exp(-2.0 * kI * x);
  return kI * (1.0 + w) / (1.0 - w);
}

/// cot(x) = lim + dev with lim = -i or i by the sign of Im x and dev -> 0 as |Im x| grows.
std::pair<Complex, Complex> cot_split(Complex x) {
  if (x.imag() >= 0) {
    Complex w = std::exp(2.0 * kI * x);
    return {-kI, -2.0 * kI * w / (1.0 - w)};
  }
  Complex w = std::exp(-2.0 * kI * x);
  return {kI, 2.0 * kI * w / (1.0 - w)};
}

/// log(1 + w) without cancellation for small w.
Complex log1p_c(Complex w) {
  if (std::abs(w) < 1e-4) return w - w * w / 2.0 + w * w * w / 3.0;
  return std::log(1.0 + w);
}

/// csc(x)^2, stable for large |Im x|.
Complex csc2(Complex x) {
  Complex w = x.imag() >= 0 ? std::exp(2.0 * kI * x) : std::exp(-2.0 * kI * x);
  return -4.0 * w / ((1.0 - w) * (1.0 - w));
}

/// Rows n with n Im tau below this bound are always summed.
int min_rows(Complex u, Complex tau) { return static_cast<int>(std::ceil(std::abs(u.imag()) / tau.imag())) + 2; }

[[noreturn]] void no_convergence() { throw DomainError("lattice sum did not reach the tolerance within the cutoff"); }

Complex wp_sum(Complex u, const Reduced& r, const NumTol& tol, double scale) {
  Complex acc = -1.0 / 3.0 + csc2(kPi * u);
  const int lo = min_rows(u, r.tau);
  for (int n = 1;; ++n) {
    if (n > tol.lattice_cutoff) no_convergence();
    Complex c = csc2(kPi * static_cast<double>(n) * r.tau);
    Complex term = csc2(kPi * (u - static_cast<double>(n) * r.tau)) + csc2(kPi * (u + static_cast<double>(n) * r.tau)) -
                   2.0 * c;
    acc += term;
    if (n >= lo && std::abs(term) * scale < tol.abs_tol * 1e-3) return acc;
  }
}

Complex wp_prime_sum(Complex u, const Reduced& r, const NumTol& tol, double scale) {
  auto row = [](Complex x) { return -2.0 * csc2(x) * cot(x); };
  Complex acc = row(kPi * u);
  const int lo = min_rows(u, r.tau);
  for (int n = 1;; ++n) {
    if (n > tol.lattice_cutoff) no_convergence();
    Complex term = row(kPi * (u - static_cast<double>(n) * r.tau)) + row(kPi * (u + static_cast<double>(n) * r.tau));
    acc += term;
    if (n >= lo && std::abs(term) * scale < tol.abs_tol * 1e-3) return acc;
  }
}

void check_pole(Complex z, const PeriodPair& L) {
  if (lattice_distance(z, L) < 1e-6 * std::abs(L.w1)) throw DomainError("evaluation point is too close to a pole");
}

}  // namespace

PeriodPair PeriodPair::make(Complex w1, Complex w2) {
  for (Complex w : {w1, w2}) {
    double a = std::abs(w);
    if (!std::isfinite(a) || a < 1e-6 || a > 1e6) throw DomainError("period magnitude outside [1e-6, 1e6]");
  }
  if ((w2 / w1).imag() <= 1e-12) throw DomainError("periods must satisfy Im(w2 / w1) > 0");
  return {w1, w2};
}

NumTol NumTol::make(double abs_tol, int lattice_cutoff) {
  if (!(abs_tol > 0)) throw DomainError("tolerance must be positive");
  if (lattice_cutoff < 20) throw DomainError("lattice cutoff must be at least 20");
  return {abs_tol, lattice_cutoff};
}

double lattice_distance(Complex z, const PeriodPair& L) {
  Reduced r = reduce_basis(L);
  Complex u = z / r.w1;
  u -= std::round(u.imag() / r.tau.imag()) * r.tau;
  u -= std::round(u.real());
  double best = std::abs(u);
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) best = std::min(best, std::abs(u - static_cast<double>(m) - static_cast<double>(n) * r.tau));
  return best * std::abs(r.w1);
}

std::pair<Complex, Complex> invariants_from_periods(const PeriodPair& L, const NumTol& tol) {
  PeriodPair::make(L.w1, L.w2);
  Reduced r = reduce_basis(L);
  Complex q = std::exp(2.0 * kPi * kI * r.tau);
  Complex k = kPi / r.w1;
  Complex k4 = k * k * k * k, k6 = k4 * k * k;
  double scale = std::max(std::abs(k4), std::abs(k6)) * 400.0;
  Complex e4 = 1.0, e6 = 1.0, qn = 1.0;
  for (int n = 1;; ++n) {
    if (n > tol.lattice_cutoff) no_convergence();
    qn *= q;
    double s3 = 0, s5 = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d) continue;
      s3 += std::pow(d, 3);
      s5 += std::pow(d, 5);
    }
    e4 += 240.0 * s3 * qn;
    e6 -= 504.0 * s5 * qn;
    if (std::abs(qn) * s5 * scale < tol.abs_tol * 1e-3) break;
  }
  return {4.0 / 3.0 * k4 * e4, 8.0 / 27.0 * k6 * e6};
}

Complex eval(WKind kind, Complex z, const PeriodPair& L, const NumTol& tol) {
  PeriodPair::make(L.w1, L.w2);
  if (kind != WKind::Sigma) check_pole(z, L);
  Reduced r = reduce_basis(L);
  Complex k = kPi / r.w1;
  Complex u = z / r.w1;
  switch (kind) {
    case WKind::Wp:
    case WKind::WpPrime: {
      u -= std::round(u.imag() / r.tau.imag()) * r.tau;
      u -= std::round(u.real());
      if (kind == WKind::Wp) return k * k * wp_sum(u, r, tol, std::abs(k * k));
      return k * k * k * wp_prime_sum(u, r, tol, std::abs(k * k * k));
    }
    case WKind::Zeta: {
      Complex rows = cot(kPi * u), consts = 1.0 / 3.0;
      const int lo = min_rows(u, r.tau);
      for (int n = 1;; ++n) {
        if (n > tol.lattice_cutoff) no_convergence();
        Complex nt = static_cast<double>(n) * r.tau;
        auto [l1, d1] = cot_split(kPi * (u - nt));
        auto [l2, d2] = cot_split(kPi * (u + nt));
        Complex a = (l1 + l2) + (d1 + d2);
        Complex c = 2.0 * csc2(kPi * nt);
        rows += a;
        consts += c;
        if (n >= lo && (std::abs(a) * std::abs(k) + std::abs(c * z) * std::norm(k)) < tol.abs_tol * 1e-3) break;
      }
      return k * rows + z * k * k * consts;
    }
    case WKind::Sigma: {
      // rows n and -n together: (1 - csc^2(pi n tau) sin^2(pi u)) exp(z^2 k^2 csc^2(pi n tau))
      Complex s = std::sin(kPi * u);
      Complex log_rest = k * k * z * z / 6.0;
      const int lo = min_rows(u, r.tau);
      for (int n = 1;; ++n) {
        if (n > tol.lattice_cutoff) no_convergence();
        Complex cs = csc2(kPi * static_cast<double>(n) * r.tau);
        Complex term = log1p_c(-cs * s * s) + z * z * k * k * cs;
        log_rest += term;
        if (n >= lo && std::abs(term) * std::max(1.0, std::abs(s / k * std::exp(log_rest))) < tol.abs_tol * 1e-3) break;
      }
      return s / k * std::exp(log_rest);
    }
  }
  throw DomainError("unknown Weierstrass kind");
}

std::pair<Complex, Complex> eta_values(const PeriodPair& L, const NumTol& tol) {
  PeriodPair::make(L.w1, L.w2);
  static constexpr double kProbes[][2] = {{0.1234, 0.2345}, {0.3713, 0.1178}, {0.2891, 0.4127}, {0.4462, 0.3306}};
  std::vector<std::pair<Complex, Complex>> found;
  for (const auto& pr : kProbes) {
    Complex z0 = pr[0] * L.w1 + pr[1] * L.w2;
    if (lattice_distance(z0, L) < 1e-3 * std::abs(L.w1)) continue;
    Complex base = eval(WKind::Zeta, z0, L, tol);
    found.emplace_back(eval(WKind::Zeta, z0 + L.w1, L, tol) - base, eval(WKind::Zeta, z0 + L.w2, L, tol) - base);
    if (found.size() == 2) break;
  }
  if (found.size() < 2) throw DomainError("no usable probe for eta");
  const auto& a = found[0];
  const auto& b = found[1];
  double mag = std::max(std::abs(a.first), std::abs(a.second));
  double allow = 10 * tol.abs_tol + 1e-13 * std::max(1.0, mag);
  if (std::abs(a.first - b.first) > allow || std::abs(a.second - b.second) > allow)
    throw DomainError("eta is not stable across probes");
  return a;
}

Complex to_complex(const Scalar& s) { return {s.re().get_d(), s.im().get_d()}; }

Complex series_eval(const LaurentSeries& s, Complex z) {
  Complex acc = 0;
  for (int n = s.stored_end() - 1; n >= s.val() && !s.is_zero(); --n) acc = acc * z + to_complex(s.coeff(n));
  if (!s.is_zero()) acc *= std::pow(z, s.val());
  return acc;
}

}  // namespace elldiff::num
