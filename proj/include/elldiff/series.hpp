#pragma once

#include <algorithm>
#include <climits>
#include <ostream>
#include <vector>

#include "elldiff/scalar.hpp"

namespace elldiff {

/// Truncation marker for series known exactly (finitely many terms).
inline constexpr int kExact = INT_MAX / 4;

inline int add_order(int a, int b) {
  if (a >= kExact || b >= kExact) return kExact;
  return a + b;
}

/// Truncated Laurent series sum_{n >= val} c_n z^n + O(z^trunc).
///
/// Coefficients are stored from `val` upward; terms past the stored range
/// and below `trunc` are zero.  A series with no stored terms is zero to its
/// truncation and reports val() == trunc().  trunc() == kExact marks an exact
/// (Laurent polynomial) value; the default-constructed series is exact zero.
template <typename T>
class Series {
 public:
  Series() = default;
  Series(T c) {  // NOLINT(google-explicit-constructor)
    if (!elldiff::is_zero(c)) {
      val_ = 0;
      c_.push_back(std::move(c));
    }
  }
  Series(long c) : Series(T(c)) {}  // NOLINT(google-explicit-constructor)
  Series(int c) : Series(T(static_cast<long>(c))) {}  // NOLINT(google-explicit-constructor)
  Series(int val, int trunc, std::vector<T> coeffs) : val_(val), trunc_(trunc), c_(std::move(coeffs)) {
    normalize();
  }

  static Series monomial(const T& c, int n) { return Series(n, kExact, {c}); }
  static Series z() { return monomial(T(1L), 1); }
  static Series zero(int trunc) { return Series(trunc, trunc, {}); }

  bool is_zero() const { return c_.empty(); }
  bool is_exact() const { return trunc_ >= kExact; }
  int val() const { return c_.empty() ? trunc_ : val_; }
  int trunc() const { return trunc_; }
  /// Number of known coefficients past the leading one.
  int rel_precision() const { return is_exact() ? kExact : trunc_ - val(); }
  const std::vector<T>& stored() const { return c_; }
  /// Exponent one past the last stored coefficient.
  int stored_end() const { return val_ + static_cast<int>(c_.size()); }

  T coeff(int n) const {
    if (n >= trunc_) throw DomainError("coefficient requested beyond truncation");
    if (c_.empty() || n < val_ || n >= stored_end()) return T(0L);
    return c_[static_cast<std::size_t>(n - val_)];
  }
  const T& lead() const { return c_.front(); }

  Series truncated(int t) const {
    if (t >= trunc_) return *this;
    Series out = *this;
    out.trunc_ = t;
    if (!out.c_.empty() && out.stored_end() > t) {
      if (t <= out.val_) {
        out.c_.clear();
      } else {
        out.c_.resize(static_cast<std::size_t>(t - out.val_));
      }
    }
    out.normalize();
    return out;
  }

  friend Series operator+(const Series& a, const Series& b) { return add(a, b, false); }
  friend Series operator-(const Series& a, const Series& b) { return add(a, b, true); }
  friend Series operator-(const Series& a) {
    Series out = a;
    for (auto& c : out.c_) c = -c;
    return out;
  }
  friend Series operator*(const Series& a, const Series& b) {
    int trunc = std::min(add_order(a.trunc_, b.val()), add_order(b.trunc_, a.val()));
    if (a.is_zero() || b.is_zero()) return zero_or_exact(trunc);
    int val = a.val_ + b.val_;
    int end = std::min(trunc, a.stored_end() + b.stored_end() - 1);
    std::vector<T> out(static_cast<std::size_t>(std::max(0, end - val)), T(0L));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (elldiff::is_zero(a.c_[i])) continue;
      std::size_t jmax = std::min(b.c_.size(), out.size() > i ? out.size() - i : 0);
      for (std::size_t j = 0; j < jmax; ++j) {
        if (!elldiff::is_zero(b.c_[j])) out[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return Series(val, trunc, std::move(out));
  }
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  Series scaled(const T& s) const {
    if (elldiff::is_zero(s)) return zero_or_exact(trunc_);
    Series out = *this;
    for (auto& c : out.c_) c *= s;
    return out;
  }
  /// Multiplication by z^k.
  Series shifted(int k) const {
    Series out = *this;
    out.val_ += k;
    if (!out.is_exact()) out.trunc_ += k;
    if (out.c_.empty()) out.val_ = out.trunc_;
    return out;
  }

  /// Reciprocal with `rel` correct coefficients (defaults to the precision of
  /// the input, which must then be inexact or a monomial).
  Series inverse(int rel = -1) const {
    if (is_zero()) throw DomainError("series division by a series that vanishes to its truncation");
    if (rel < 0) {
      if (is_exact()) {
        if (c_.size() == 1) return monomial(T(1L) / c_[0], -val_);
        throw DomainError("inverse of an exact non-monomial series needs an explicit precision");
      }
      rel = rel_precision();
    }
    std::vector<T> out(static_cast<std::size_t>(rel), T(0L));
    T inv0 = T(1L) / c_[0];
    for (int n = 0; n < rel; ++n) {
      T acc = n == 0 ? T(1L) : T(0L);
      for (int k = 1; k <= n && k < static_cast<int>(c_.size()); ++k) {
        acc -= c_[static_cast<std::size_t>(k)] * out[static_cast<std::size_t>(n - k)];
      }
      out[static_cast<std::size_t>(n)] = acc * inv0;
    }
    int trunc = (c_.size() == 1 && is_exact() && rel >= kExact) ? kExact : -val_ + rel;
    return Series(-val_, trunc, std::move(out));
  }

  friend Series operator/(const Series& a, const Series& b) {
    if (b.is_zero()) throw DomainError("series division by a series that vanishes to its truncation");
    if (b.is_exact() && b.c_.size() == 1) return a * b.inverse();
    if (b.is_exact()) {
      if (a.is_exact()) {
        if (a.is_zero()) return Series();
        throw DomainError("quotient of exact series needs an explicit precision");
      }
      // relative precision of a is all that can be guaranteed
      int rel = a.is_zero() ? 0 : a.rel_precision();
      if (a.is_zero()) return zero(a.trunc_ - b.val_);
      return (a * b.inverse(rel)).truncated(a.val_ - b.val_ + rel);
    }
    int rel = b.rel_precision();
    if (!a.is_exact()) rel = std::min(rel, a.is_zero() ? rel : a.rel_precision());
    if (a.is_zero()) return zero(a.trunc_ - b.val_);
    return (a * b.inverse(rel)).truncated(a.val_ - b.val_ + rel);
  }

  Series derivative() const {
    std::vector<T> out;
    out.reserve(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
      out.push_back(c_[k] * T(static_cast<long>(val_ + static_cast<int>(k))));
    }
    int trunc = is_exact() ? kExact : trunc_ - 1;
    if (c_.empty()) return zero_or_exact(trunc);
    return Series(val_ - 1, trunc, std::move(out));
  }

  /// Termwise antiderivative with zero constant term; the z^-1 coefficient
  /// must vanish.
  Series integral() const {
    std::vector<T> out;
    out.reserve(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
      int n = val_ + static_cast<int>(k);
      if (n == -1) {
        if (!elldiff::is_zero(c_[k])) throw DomainError("cannot integrate a series with a z^-1 term");
        out.push_back(T(0L));
        continue;
      }
      out.push_back(c_[k] / T(static_cast<long>(n + 1)));
    }
    int trunc = is_exact() ? kExact : trunc_ + 1;
    if (c_.empty()) return zero_or_exact(trunc);
    return Series(val_ + 1, trunc, std::move(out));
  }

  /// exp(f) for f with positive valuation.
  Series exp() const {
    if (!is_zero() && val_ <= 0) throw DomainError("exp needs a series without constant or pole terms");
    if (is_exact() && is_zero()) return Series(T(1L));
    if (is_exact()) throw DomainError("exp of an exact series needs a truncation");
    int t = trunc_;
    // E' = f' E, solved coefficientwise
    std::vector<T> e(static_cast<std::size_t>(std::max(t, 1)), T(0L));
    e[0] = T(1L);
    Series df = derivative();
    for (int n = 1; n < t; ++n) {
      T acc(0L);
      for (int k = 1; k <= n; ++k) {
        int m = k - 1;  // coefficient of z^m in f'
        if (m < df.val() || m >= df.stored_end()) continue;
        acc += df.coeff(m) * e[static_cast<std::size_t>(n - k)];
      }
      e[static_cast<std::size_t>(n)] = acc / T(static_cast<long>(n));
    }
    return Series(0, t, std::move(e));
  }

  /// f(m z) for rational m: c_n -> c_n m^n.
  Series scale_arg(const Rational& m) const {
    if (sgn(m) == 0) throw DomainError("scale_arg needs a nonzero factor");
    Series out = *this;
    for (std::size_t k = 0; k < out.c_.size(); ++k) {
      int n = val_ + static_cast<int>(k);
      Rational p(1);
      Rational base = n >= 0 ? m : Rational(1) / m;
      for (int e = 0; e < std::abs(n); ++e) p *= base;
      out.c_[k] *= FieldTraits<T>::from_rational(p);
    }
    return out;
  }

  /// Value of the stored terms at a point (numeric types only).
  template <typename U>
  U evaluate(const U& z) const {
    U acc(0);
    for (int k = static_cast<int>(c_.size()) - 1; k >= 0; --k) acc = acc * z + U(c_[static_cast<std::size_t>(k)]);
    return acc * std::pow(z, val_);
  }

  /// Equal to a common truncation.
  bool agrees_with(const Series& o) const {
    int t = std::min(trunc_, o.trunc_);
    return truncated(t) == o.truncated(t);
  }

  friend bool operator==(const Series& a, const Series& b) {
    return a.trunc_ == b.trunc_ && a.val() == b.val() && a.c_ == b.c_;
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

 private:
  static Series zero_or_exact(int trunc) { return Series(trunc, trunc, {}); }

  static Series add(const Series& a, const Series& b, bool subtract) {
    int trunc = std::min(a.trunc_, b.trunc_);
    if (a.is_zero() && b.is_zero()) return zero_or_exact(trunc);
    int val = std::min(a.is_zero() ? b.val_ : a.val_, b.is_zero() ? a.val_ : b.val_);
    int end = std::max(a.is_zero() ? val : a.stored_end(), b.is_zero() ? val : b.stored_end());
    end = std::min(end, trunc);
    if (end <= val) return zero_or_exact(trunc);
    std::vector<T> out(static_cast<std::size_t>(end - val), T(0L));
    for (std::size_t k = 0; k < a.c_.size(); ++k) {
      int n = a.val_ + static_cast<int>(k);
      if (n >= end) break;
      out[static_cast<std::size_t>(n - val)] += a.c_[k];
    }
    for (std::size_t k = 0; k < b.c_.size(); ++k) {
      int n = b.val_ + static_cast<int>(k);
      if (n >= end) break;
      if (subtract) {
        out[static_cast<std::size_t>(n - val)] -= b.c_[k];
      } else {
        out[static_cast<std::size_t>(n - val)] += b.c_[k];
      }
    }
    return Series(val, trunc, std::move(out));
  }

  void normalize() {
    if (!c_.empty() && stored_end() > trunc_) {
      c_.resize(static_cast<std::size_t>(std::max(0, trunc_ - val_)));
    }
    std::size_t lead = 0;
    while (lead < c_.size() && elldiff::is_zero(c_[lead])) ++lead;
    if (lead > 0) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
      val_ += static_cast<int>(lead);
    }
    while (!c_.empty() && elldiff::is_zero(c_.back())) c_.pop_back();
    if (c_.empty()) val_ = trunc_;
  }

  int val_ = kExact;
  int trunc_ = kExact;
  std::vector<T> c_;
};

template <typename T>
std::ostream& operator<<(std::ostream& os, const Series<T>& s) {
  bool first = true;
  for (int n = s.val(); n < s.stored_end() && !s.is_zero(); ++n) {
    T c = s.coeff(n);
    if (is_zero(c)) continue;
    if (!first) os << " + ";
    first = false;
    os << '(' << c << ")*z^" << n;
  }
  if (first) os << '0';
  if (!s.is_exact()) os << " + O(z^" << s.trunc() << ')';
  return os;
}

}  // namespace elldiff
