#include "elldiff/scalar.hpp"

#include <sstream>

namespace elldiff {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational literal");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/' || c == '+')) {
      throw DomainError("malformed rational literal '" + s + "'");
    }
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw DomainError("malformed rational literal '" + s + "'");
  if (sgn(r.get_den()) == 0) throw DomainError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
  Integer bound;
  Integer half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Integer r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational out(r1, t1);
  out.canonicalize();
  return out;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("division by zero in Q(i)");
  if (is_real()) return Scalar(Rational(1) / re_);
  Rational n = norm();
  return {re_ / n, -im_ / n};
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << to_string(s); }

std::string to_string(const Scalar& s) {
  if (s.is_real()) return s.re().get_str();
  std::ostringstream os;
  if (sgn(s.re()) != 0) {
    os << s.re().get_str();
    if (sgn(s.im()) > 0) os << '+';
  }
  os << s.im().get_str() << "*i";
  return os.str();
}

std::size_t hash_value(const Scalar& s) {
  std::hash<std::string> h;
  return h(s.re().get_str()) * 31U + h(s.im().get_str());
}

}  // namespace elldiff
