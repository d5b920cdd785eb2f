#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "elldiff/scalar.hpp"

namespace elldiff {

/// Dense univariate polynomial, ascending coefficients. The zero polynomial
/// is the empty vector; otherwise the leading coefficient is nonzero.
template <typename T>
class Poly {
 public:
  Poly() = default;
  Poly(T c) {  // NOLINT(google-explicit-constructor)
    if (!elldiff::is_zero(c)) c_.push_back(std::move(c));
  }
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }
  static Poly monomial(const T& c, int degree) {
    std::vector<T> v(static_cast<std::size_t>(degree) + 1, T(0));
    v.back() = c;
    return Poly(std::move(v));
  }

  const std::vector<T>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  T coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : T(0);
  }
  const T& lead() const { return c_.back(); }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (elldiff::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const T& s) const {
    if (elldiff::is_zero(s)) return {};
    Poly out = *this;
    for (auto& c : out.c_) c *= s;
    return out;
  }

  /// Euclidean division; throws on division by the zero polynomial.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<T> rem = a.c_;
    std::vector<T> quo(static_cast<std::size_t>(a.degree() - b.degree()) + 1, T(0));
    T inv_lead = T(1) / b.lead();
    for (int k = a.degree(); k >= b.degree(); --k) {
      T& top = rem[static_cast<std::size_t>(k)];
      if (elldiff::is_zero(top)) continue;
      T f = top * inv_lead;
      int shift = k - b.degree();
      for (int j = 0; j <= b.degree(); ++j) {
        rem[static_cast<std::size_t>(j + shift)] -= f * b.c_[static_cast<std::size_t>(j)];
      }
      quo[static_cast<std::size_t>(shift)] = std::move(f);
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
  }

  /// Exact division; throws when a remainder is left.
  static Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw DomainError("polynomial division is not exact");
    return q;
  }

  Poly monic() const {
    if (is_zero()) return {};
    return scaled(T(1) / lead());
  }

  /// Monic gcd (zero if both inputs vanish).
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = r.monic();
    }
    return a.monic();
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> out(c_.size() - 1, T(0));
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * T(static_cast<long>(k));
    return Poly(std::move(out));
  }

  template <typename U>
  U eval(const U& x) const {
    if (c_.empty()) return U(0);
    U acc(c_.back());
    for (int k = degree() - 1; k >= 0; --k) {
      acc = acc * x + U(c_[static_cast<std::size_t>(k)]);
    }
    return acc;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && elldiff::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

/// Reduced quotient num/den with den monic and gcd(num, den) = 1.
template <typename T>
class RatFn {
 public:
  RatFn() : den_(T(1)) {}
  RatFn(T c) : num_(std::move(c)), den_(T(1)) {}  // NOLINT(google-explicit-constructor)
  RatFn(Poly<T> p) : num_(std::move(p)), den_(T(1)) {}  // NOLINT(google-explicit-constructor)
  RatFn(Poly<T> num, Poly<T> den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

  static RatFn x() { return RatFn(Poly<T>::x()); }

  const Poly<T>& num() const { return num_; }
  const Poly<T>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// deg(num) - deg(den); the order of the pole at x = infinity.
  int degree() const { return num_.degree() - den_.degree(); }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFn(a.num_ + b.num_, a.den_);
    return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFn operator-(const RatFn& a) {
    RatFn out = a;
    out.num_ = -out.num_;
    return out;
  }
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) {
      RatFn out;
      out.num_ = a.num_ * b.num_;
      return out;
    }
    Poly<T> g1 = Poly<T>::gcd(a.num_, b.den_);
    Poly<T> g2 = Poly<T>::gcd(b.num_, a.den_);
    RatFn out;
    out.num_ = Poly<T>::exact_div(a.num_, g1) * Poly<T>::exact_div(b.num_, g2);
    out.den_ = Poly<T>::exact_div(a.den_, g2) * Poly<T>::exact_div(b.den_, g1);
    out.normalize_lead();
    return out;
  }
  RatFn inverse() const {
    if (is_zero()) throw DomainError("rational function division by zero");
    RatFn out;
    out.num_ = den_;
    out.den_ = num_;
    out.normalize_lead();
    return out;
  }
  friend RatFn operator/(const RatFn& a, const RatFn& b) { return a * b.inverse(); }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
  RatFn& operator*=(const RatFn& o) { return *this = *this * o; }

  RatFn derivative() const {
    if (is_polynomial()) return RatFn(num_.derivative());
    return RatFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// Substitutes a rational function for the variable: this(inner(x)).
  RatFn compose(const RatFn& inner) const {
    if (num_.is_zero()) return {};
    const Poly<T>& n = inner.num_;
    const Poly<T>& d = inner.den_;
    int dn = num_.degree();
    int dd = den_.degree();
    int top = std::max(dn, dd);
    std::vector<Poly<T>> dpow(static_cast<std::size_t>(top) + 1);
    dpow[0] = Poly<T>(T(1));
    for (int k = 1; k <= top; ++k) dpow[static_cast<std::size_t>(k)] = dpow[static_cast<std::size_t>(k - 1)] * d;
    // P(n/d) * d^top = sum p_k n^k d^(top-k)
    auto homog = [&](const Poly<T>& p) {
      Poly<T> acc;
      Poly<T> npow(T(1));
      for (int k = 0; k <= p.degree(); ++k) {
        if (!elldiff::is_zero(p.coeff(k))) {
          acc += (npow * dpow[static_cast<std::size_t>(top - k)]).scaled(p.coeff(k));
        }
        if (k < p.degree()) npow = npow * n;
      }
      return acc;
    };
    return RatFn(homog(num_), homog(den_));
  }

  template <typename U>
  U eval(const U& x) const {
    return num_.eval(x) / den_.eval(x);
  }

  std::optional<T> constant_value() const {
    if (num_.is_constant() && den_.degree() == 0) return num_.is_zero() ? T(0) : num_.lead();
    return std::nullopt;
  }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

 private:
  void normalize_lead() {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly<T>(T(1));
      return;
    }
    T lc = den_.lead();
    if (!(lc == T(1))) {
      T inv = T(1) / lc;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
  void reduce() {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Poly<T>(T(1));
      return;
    }
    if (den_.degree() > 0) {
      Poly<T> g = Poly<T>::gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = Poly<T>::exact_div(num_, g);
        den_ = Poly<T>::exact_div(den_, g);
      }
    }
    normalize_lead();
  }

  Poly<T> num_;
  Poly<T> den_;
};

}  // namespace elldiff
