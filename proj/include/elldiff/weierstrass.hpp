#pragma once

#include <vector>

#include "elldiff/ellfn.hpp"
#include "elldiff/series.hpp"

namespace elldiff {

enum class WKind { Wp, WpPrime, Zeta, Sigma };

/// Coefficients c_2, c_3, ... of wp = z^-2 + sum c_k z^(2k-2); entry k holds c_k
/// (entries 0 and 1 unused).
template <typename T>
std::vector<T> weierstrass_coeffs(const T& g2, const T& g3, int kmax) {
  std::vector<T> c(static_cast<std::size_t>(std::max(kmax, 3)) + 1, T(0L));
  c[2] = g2 / T(20L);
  c[3] = g3 / T(28L);
  for (int k = 4; k <= kmax; ++k) {
    T acc(0L);
    for (int i = 2; i <= k - 2; ++i) acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(k - i)];
    c[static_cast<std::size_t>(k)] = acc * T(3L) / T(static_cast<long>((2 * k + 1) * (k - 3)));
  }
  return c;
}

/// Expansion at 0 truncated at z^order.
template <typename T>
Series<T> weierstrass_series(const T& g2, const T& g3, WKind kind, int order) {
  if (order < 8) throw DomainError("weierstrass_series needs order >= 8");
  int kmax = (order + 4) / 2;
  std::vector<T> c = weierstrass_coeffs(g2, g3, kmax);
  switch (kind) {
    case WKind::Wp:
    case WKind::WpPrime: {
      int t = kind == WKind::Wp ? order : order + 1;
      std::vector<T> v(static_cast<std::size_t>(t + 2), T(0L));
      v[0] = T(1L);
      for (int k = 2; 2 * k - 2 < t; ++k) v[static_cast<std::size_t>(2 * k)] = c[static_cast<std::size_t>(k)];
      Series<T> wp(-2, t, std::move(v));
      return kind == WKind::Wp ? wp : wp.derivative();
    }
    case WKind::Zeta: {
      std::vector<T> v(static_cast<std::size_t>(order + 1), T(0L));
      v[0] = T(1L);
      for (int k = 2; 2 * k - 1 < order; ++k) {
        v[static_cast<std::size_t>(2 * k)] = -c[static_cast<std::size_t>(k)] / T(static_cast<long>(2 * k - 1));
      }
      return Series<T>(-1, order, std::move(v));
    }
    case WKind::Sigma: {
      // sigma = z exp(-sum c_k z^(2k) / ((2k-1) 2k))
      std::vector<T> v(static_cast<std::size_t>(order), T(0L));
      for (int k = 2; 2 * k < order - 1; ++k) {
        v[static_cast<std::size_t>(2 * k)] =
            -c[static_cast<std::size_t>(k)] / T(static_cast<long>((2 * k - 1) * 2 * k));
      }
      Series<T> expo(0, order - 1, std::move(v));
      return expo.exp().shifted(1);
    }
  }
  throw DomainError("unknown Weierstrass kind");
}

inline Series<Scalar> weierstrass_series(const CurveParams& curve, WKind kind, int order) {
  return weierstrass_series<Scalar>(curve.g2, curve.g3, kind, order);
}

}  // namespace elldiff
