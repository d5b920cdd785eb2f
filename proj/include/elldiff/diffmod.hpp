#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "elldiff/divisors.hpp"
#include "elldiff/isogeny.hpp"
#include "elldiff/laurent.hpp"

namespace elldiff {

/// phi(Y) = A Y with phi f(z) = f(scale * z).
struct DiffSystem {
  EMat A;
  long scale = 2;
  CurveRef curve;

  /// Checks squareness, a common curve, scale >= 2 and det A != 0.
  static DiffSystem make(EMat A, long scale);
};

struct CompatPair {
  DiffSystem phi;
  DiffSystem psi;

  /// Same size and curve, coprime scales.
  static CompatPair make(DiffSystem phi, DiffSystem psi);
};

/// Entrywise pullback by z -> m z.
EMat pullback(const EMat& m, long factor);

/// a_0 phi^n(u) + a_1 phi^{n-1}(u) + ... + a_n u = 0 as a first-order system
/// for (u, phi u, ..., phi^{n-1} u).
DiffSystem companion(const std::vector<EllFn>& coeffs, long scale);

/// phi(P)^{-1} A P.
DiffSystem gauge(const DiffSystem& A, const EMat& P);

/// phi^{t-1}(A) ... phi(A) A, a system for phi^t.
DiffSystem iterate_system(const DiffSystem& A, int t);

/// A^{-1} phi(P).
EMat tau_step(const EMat& P, const DiffSystem& A);

/// phi(A_psi) A_phi == psi(A_phi) A_psi, exactly.
bool isomonodromy_check(const CompatPair& pair);

struct HConstant {
  SMat h;
  /// Every entry is known to be constant modulo z^order.
  int order = 0;
};

struct HNotConstant {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  /// Lowest exponent n != 0 with a nonzero coefficient.
  int order = 0;
};

using HResult = std::variant<HConstant, HNotConstant>;

/// psi(U)^{-1} A_psi U as series; constant when A_psi is compatible with the
/// phi-system solved by U.
HResult h_matrix(const LMat& U, const DiffSystem& A_psi, long p);

struct PvExample {
  DiffSystem A;
  LMat U;
};

/// A = [[m, g_m], [0, 1]] with fundamental matrix U = [[z, zeta], [0, 1]].
PvExample pv_example_system(const CurveRef& curve, long m, int order = 40);

/// Lattice coordinates attached to points of the curve.
using PointLabels = std::vector<std::pair<PointC, PointXY>>;

enum class VerdictKind { Descends, PsiTranscendental, Inconclusive };
enum class VerdictReason { None, Ord0, NoDescentOrbit, InconclusiveBounds };

struct VerdictOrderOne {
  VerdictKind kind = VerdictKind::Inconclusive;
  VerdictReason reason = VerdictReason::None;
  /// Descends: delta with alpha = delta(qz) - delta(z), periodic on its lattice.
  std::optional<PeriodicFn> delta;
  /// Descends with materialized b: a = c phi(b) / b.
  std::optional<EllFn> b;
  std::optional<Scalar> c;
  /// NoDescentOrbit: the offending orbit.
  std::vector<PointC> orbit;
  std::string note;
};

/// Decides whether phi(u) = a u descends, given alpha = div(a). When a and
/// labels for the support of delta are supplied, b is built and c certified.
VerdictOrderOne order_one_verdict(const PeriodicFn& alpha, const std::optional<EllFn>& a, const PointLabels& labels,
                                  long q);

struct NeedsExtension {
  /// Characteristic polynomial factor without roots in Q(i).
  SPoly factor;
  bool irreducible = false;
};

using EigenResult = std::variant<SVec, NeedsExtension>;

/// Monic characteristic polynomial det(x I - A).
SPoly char_poly(const SMat& A);

/// Roots of p in Q(i), without multiplicity.
std::vector<Scalar> gaussian_roots(const SPoly& p);

/// Common eigenvector of commuting A and B over Q(i).
EigenResult common_eigenvector(const SMat& A, const SMat& B);

}  // namespace elldiff
