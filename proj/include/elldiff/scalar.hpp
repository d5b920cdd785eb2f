#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace elldiff {

using Rational = mpq_class;
using Integer = mpz_class;

/// Raised for violations of a mathematical precondition (division by zero,
/// incompatible curves, singular matrices, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q" into a canonical rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

/// n/d with n = d a mod m and |n|, d <= sqrt(m/2), if one exists.
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m);

/// Element of Q(i), stored as a pair of canonical rationals.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : re_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Total order used only for canonical sorting (lexicographic on re, im).
  friend bool lex_less(const Scalar& a, const Scalar& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s);

 private:
  Rational re_{0};
  Rational im_{0};
};

std::string to_string(const Scalar& s);
std::size_t hash_value(const Scalar& s);

/// Arithmetic in Z/PZ.  P must be a prime below 2^62 with P = 1 mod 4 so that
/// Q(i) maps into the field via a fixed square root of -1.
template <std::uint64_t P>
class ModP {
 public:
  static constexpr std::uint64_t modulus = P;

  ModP() = default;
  ModP(long v) {  // NOLINT(google-explicit-constructor)
    long r = v % static_cast<long>(P);
    v_ = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long>(P) : r);
  }
  static ModP raw(std::uint64_t v) {
    ModP m;
    m.v_ = v % P;
    return m;
  }

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  ModP& operator+=(ModP o) {
    v_ += o.v_;
    if (v_ >= P) v_ -= P;
    return *this;
  }
  ModP& operator-=(ModP o) {
    v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + P - o.v_;
    return *this;
  }
  ModP& operator*=(ModP o) {
    v_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(v_) * o.v_ % P);
    return *this;
  }
  ModP& operator/=(ModP o) { return *this *= o.inverse(); }
  friend ModP operator+(ModP a, ModP b) { return a += b; }
  friend ModP operator-(ModP a, ModP b) { return a -= b; }
  friend ModP operator*(ModP a, ModP b) { return a *= b; }
  friend ModP operator/(ModP a, ModP b) { return a /= b; }
  friend ModP operator-(ModP a) { return ModP() - a; }
  friend bool operator==(ModP a, ModP b) { return a.v_ == b.v_; }
  friend bool operator!=(ModP a, ModP b) { return a.v_ != b.v_; }

  ModP pow(std::uint64_t e) const {
    ModP base = *this, acc = ModP(1);
    while (e) {
      if (e & 1U) acc *= base;
      base *= base;
      e >>= 1U;
    }
    return acc;
  }
  ModP inverse() const {
    if (v_ == 0) throw DomainError("division by zero mod p");
    return pow(P - 2);
  }

  /// A fixed square root of -1.
  static ModP sqrt_minus_one() {
    static const ModP root = [] {
      for (std::uint64_t a = 2;; ++a) {
        ModP c = ModP::raw(a).pow((P - 1) / 4);
        if (c * c == ModP(-1)) return c;
      }
    }();
    return root;
  }

  static ModP from_rational(const Rational& r) {
    return from_integer(r.get_num()) / from_integer(r.get_den());
  }
  static ModP from_integer(const Integer& z) {
    static_assert(sizeof(unsigned long) == 8);
    return raw(mpz_fdiv_ui(z.get_mpz_t(), P));
  }
  /// Image of a Gaussian rational under i -> sqrt_minus_one() (or its negative).
  static ModP from_scalar(const Scalar& s, bool conjugate_embedding = false) {
    ModP iota = sqrt_minus_one();
    if (conjugate_embedding) iota = -iota;
    ModP out = from_rational(s.re());
    if (!s.is_real()) out += from_rational(s.im()) * iota;
    return out;
  }

 private:
  std::uint64_t v_ = 0;
};

inline constexpr std::uint64_t kPrime0 = 4611686018427387817ULL;
inline constexpr std::uint64_t kPrime1 = 4611686018427387761ULL;
inline constexpr std::uint64_t kPrime2 = 4611686018427387737ULL;
inline constexpr std::uint64_t kPrime3 = 4611686018427387733ULL;

/// Uniform access to the fields used as coefficient rings.
template <typename T>
struct FieldTraits;

template <>
struct FieldTraits<Scalar> {
  static Scalar from_rational(const Rational& r) { return Scalar(r); }
  static Scalar from_scalar(const Scalar& s) { return s; }
  static bool is_zero(const Scalar& s) { return s.is_zero(); }
};

template <std::uint64_t P>
struct FieldTraits<ModP<P>> {
  static ModP<P> from_rational(const Rational& r) { return ModP<P>::from_rational(r); }
  static ModP<P> from_scalar(const Scalar& s) { return ModP<P>::from_scalar(s); }
  static bool is_zero(const ModP<P>& s) { return s.is_zero(); }
};

template <>
struct FieldTraits<std::complex<double>> {
  static std::complex<double> from_rational(const Rational& r) { return {r.get_d(), 0.0}; }
  static std::complex<double> from_scalar(const Scalar& s) { return s.to_complex(); }
  static bool is_zero(const std::complex<double>& s) { return s == std::complex<double>(0.0, 0.0); }
};

template <typename T>
bool is_zero(const T& v) {
  return FieldTraits<T>::is_zero(v);
}

}  // namespace elldiff

template <>
struct std::hash<elldiff::Scalar> {
  std::size_t operator()(const elldiff::Scalar& s) const noexcept { return elldiff::hash_value(s); }
};
