#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "elldiff/ellfn.hpp"
#include "elldiff/matrix.hpp"
#include "elldiff/series.hpp"
#include "elldiff/weierstrass.hpp"

namespace elldiff {

using LaurentSeries = Series<Scalar>;

/// Expansion of f at z = 0 with x = wp, y = wp', truncated at z^order.
LaurentSeries embed(const EllFn& f, int order);

/// f(mz).
inline LaurentSeries scale_arg(const LaurentSeries& f, long m) {
  if (m <= 0) throw DomainError("scale_arg needs a positive integer factor");
  return f.scale_arg(Rational(m));
}

/// Finite sum of k_ij z^i zeta^j with k_ij in K.
struct SElement {
  CurveRef curve;
  std::map<std::pair<int, int>, EllFn> terms;
  int max_zeta_pow = 8;

  void add(int i, int j, const EllFn& k);
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const SElement& a, const SElement& b) { return a.terms == b.terms; }
};

LaurentSeries embed_S(const SElement& s, int order);

struct MembershipBounds {
  int max_zeta_pow = 3;
  int max_z_range = 3;
  int max_pole_order = 10;
};

/// Number of candidate basis elements for the given bounds.
int membership_dimension(const MembershipBounds& b);

/// Searches f in the span of L(P.O) z^i zeta^j (|i| <= I, j <= J).  A returned
/// element re-expands to f exactly; nullopt is a proof of non-membership in
/// that span.  Throws when f is truncated too early for the bounds.
std::optional<SElement> s_membership(const LaurentSeries& f, const CurveRef& curve, const MembershipBounds& bounds);

struct ScalarSolve {
  std::optional<LaurentSeries> particular;
  std::vector<int> resonances;
  int homogeneous_dim = 0;
  std::optional<int> obstruction;
};

/// u(qz) = a u(z) + b(z), coefficientwise.
ScalarSolve solve_scalar_first_order(const Scalar& a, const LaurentSeries& b, long q);

struct SystemCheck {
  bool passed = false;
  /// Guaranteed vanishing order on success, else first failing exponent.
  int order = 0;
};

/// Residual of U(mz) - A(z) U(z).
SystemCheck verify_system(const LMat& A, const LMat& U, long m);

struct RegularSolutions {
  std::vector<Vec<LaurentSeries>> solutions;
  std::vector<int> resonances;
  /// Seeds that met an inconsistent resonance and were dropped.
  std::vector<int> obstructed_at;
};

/// Power-series solutions of Y(qz) = A(z) Y(z) for A analytic at 0 with A(0)
/// invertible.
RegularSolutions solve_system_regular(const LMat& A, long q, int order);

/// Entrywise embedding of a matrix over K.
LMat embed_matrix(const EMat& m, int order);

/// Inverse of a square matrix of series (pivoting on the lowest valuation).
LMat series_inverse(const LMat& m);

}  // namespace elldiff
