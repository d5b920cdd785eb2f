#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "elldiff/ellfn.hpp"
#include "elldiff/scalar.hpp"
#include "elldiff/series.hpp"

namespace Eigen {

template <>
struct NumTraits<elldiff::Scalar> : GenericNumTraits<elldiff::Scalar> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 4, AddCost = 8, MulCost = 16 };
};

template <std::uint64_t P>
struct NumTraits<elldiff::ModP<P>> : GenericNumTraits<elldiff::ModP<P>> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 1, MulCost = 2 };
};

template <>
struct NumTraits<elldiff::EllFn> : GenericNumTraits<elldiff::EllFn> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 8, AddCost = 64, MulCost = 256 };
};

template <typename T>
struct NumTraits<elldiff::Series<T>> : GenericNumTraits<elldiff::Series<T>> {
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 8, AddCost = 64, MulCost = 256 };
};

}  // namespace Eigen

namespace elldiff {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using SMat = Mat<Scalar>;
using SVec = Vec<Scalar>;
using EMat = Mat<EllFn>;
using LMat = Mat<Series<Scalar>>;

template <>
struct FieldTraits<EllFn> {
  static bool is_zero(const EllFn& f) { return f.is_zero(); }
};

template <typename T>
struct FieldTraits<Series<T>> {
  static bool is_zero(const Series<T>& s) { return s.is_zero(); }
};

/// Exact zero: entries that can be skipped without losing truncation data.
template <typename T>
bool structurally_zero(const T& v) {
  return is_zero(v);
}
template <typename T>
bool structurally_zero(const Series<T>& s) {
  return s.is_zero() && s.is_exact();
}

/// Preference for a pivot (lower is better); nullopt for zero entries.
template <typename T>
std::optional<long> pivot_score(const T& v) {
  if (is_zero(v)) return std::nullopt;
  return 0;
}

template <>
inline std::optional<long> pivot_score<EllFn>(const EllFn& f) {
  if (f.is_zero()) return std::nullopt;
  auto size = [](const SRatFn& r) { return static_cast<long>(r.num().degree() + 1 + r.den().degree()); };
  return size(f.a()) + size(f.b());
}

template <>
inline std::optional<long> pivot_score<Series<Scalar>>(const Series<Scalar>& s) {
  if (s.is_zero()) return std::nullopt;
  return s.val();
}

template <typename T>
Mat<T> identity(Eigen::Index n) {
  Mat<T> m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = i == j ? T(1L) : T(0L);
  return m;
}

template <typename T>
Mat<T> zeros(Eigen::Index r, Eigen::Index c) {
  Mat<T> m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = T(0L);
  return m;
}

/// Product written out so that no zero-initialisation or BLAS kernel
/// assumptions are made about T.
template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product: dimension mismatch");
  Mat<T> out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      T acc(0L);
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        if (structurally_zero(a(i, k)) || structurally_zero(b(k, j))) continue;
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

template <typename T>
bool mat_equal(const Mat<T>& a, const Mat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

/// In-place reduced row echelon form over an exact field; returns pivot
/// columns.
template <typename T>
std::vector<Eigen::Index> rref(Mat<T>& m) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index best = -1;
    std::optional<long> best_score;
    for (Eigen::Index r = row; r < m.rows(); ++r) {
      auto s = pivot_score(m(r, col));
      if (s && (!best_score || *s < *best_score)) {
        best = r;
        best_score = s;
        if (*s == 0) break;
      }
    }
    if (best < 0) continue;
    if (best != row) m.row(best).swap(m.row(row));
    T inv = T(1L) / m(row, col);
    for (Eigen::Index c = col; c < m.cols(); ++c) {
      if (!structurally_zero(m(row, c))) m(row, c) = m(row, c) * inv;
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || structurally_zero(m(r, col))) continue;
      T f = m(r, col);
      for (Eigen::Index c = col; c < m.cols(); ++c) {
        if (!structurally_zero(m(row, c))) m(r, c) -= f * m(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <typename T>
Eigen::Index rank(Mat<T> m) {
  return static_cast<Eigen::Index>(rref(m).size());
}

/// Basis of {v : m v = 0} as the columns of the result.
template <typename T>
Mat<T> nullspace(Mat<T> m) {
  auto pivots = rref(m);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (auto p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) free.push_back(c);
  Mat<T> basis = zeros<T>(m.cols(), static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    Eigen::Index f = free[k];
    auto kk = static_cast<Eigen::Index>(k);
    basis(f, kk) = T(1L);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      basis(pivots[r], kk) = -m(static_cast<Eigen::Index>(r), f);
    }
  }
  return basis;
}

/// A solution of m x = b, or nullopt when inconsistent.
template <typename T>
std::optional<Vec<T>> solve(const Mat<T>& m, const Vec<T>& b) {
  Mat<T> aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = b;
  auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec<T> x(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) x(c) = T(0L);
  for (std::size_t r = 0; r < pivots.size(); ++r) x(pivots[r]) = aug(static_cast<Eigen::Index>(r), m.cols());
  return x;
}

/// Gauss-Jordan inverse; throws DomainError when singular.
template <typename T>
Mat<T> inverse(const Mat<T>& m) {
  if (m.rows() != m.cols()) throw DomainError("inverse of a non-square matrix");
  Eigen::Index n = m.rows();
  Mat<T> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = identity<T>(n);
  auto pivots = rref(aug);
  if (static_cast<Eigen::Index>(pivots.size()) < n || (n > 0 && pivots.back() >= n)) {
    throw DomainError("matrix is singular");
  }
  return aug.rightCols(n);
}

template <typename T>
T determinant(Mat<T> m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  Eigen::Index n = m.rows();
  T det(1L);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index best = -1;
    std::optional<long> best_score;
    for (Eigen::Index r = col; r < n; ++r) {
      auto s = pivot_score(m(r, col));
      if (s && (!best_score || *s < *best_score)) {
        best = r;
        best_score = s;
      }
    }
    if (best < 0) return T(0L);
    if (best != col) {
      m.row(best).swap(m.row(col));
      det = -det;
    }
    det *= m(col, col);
    T inv = T(1L) / m(col, col);
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (is_zero(m(r, col))) continue;
      T f = m(r, col) * inv;
      for (Eigen::Index c = col; c < n; ++c) {
        if (!is_zero(m(col, c))) m(r, c) -= f * m(col, c);
      }
    }
  }
  return det;
}

template <typename T, typename F>
auto map_entries(const Mat<T>& m, F&& f) {
  using U = std::decay_t<decltype(f(m(0, 0)))>;
  Mat<U> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = f(m(i, j));
  return out;
}

}  // namespace elldiff
