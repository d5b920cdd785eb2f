#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "elldiff/scalar.hpp"

namespace elldiff {

/// c * g + v1 w1 + v2 w2, where g is a formal generator independent of the
/// periods. Points without a generator are torsion once reduced mod a lattice.
class PointC {
 public:
  PointC() = default;
  PointC(Rational v1, Rational v2);
  PointC(std::string gen, Rational c, Rational v1 = 0, Rational v2 = 0);
  /// Raw constructor; gen absent requires c = 0.
  PointC(Rational c, std::optional<std::string> gen, std::array<Rational, 2> v);

  const Rational& c() const { return c_; }
  const std::optional<std::string>& gen() const { return gen_; }
  const std::array<Rational, 2>& v() const { return v_; }
  bool is_torsion() const { return !gen_; }
  bool is_zero() const { return !gen_ && sgn(v_[0]) == 0 && sgn(v_[1]) == 0; }

  PointC scaled(const Rational& s) const;
  /// Sum of two points; at most one generator may appear.
  friend PointC operator+(const PointC& a, const PointC& b);
  friend PointC operator-(const PointC& a, const PointC& b) { return a + b.scaled(-1); }

  friend bool operator==(const PointC& a, const PointC& b) {
    return a.gen_ == b.gen_ && a.c_ == b.c_ && a.v_ == b.v_;
  }
  friend bool operator!=(const PointC& a, const PointC& b) { return !(a == b); }
  friend bool operator<(const PointC& a, const PointC& b);
  friend std::ostream& operator<<(std::ostream& os, const PointC& p);

 private:
  Rational c_;
  std::optional<std::string> gen_;
  std::array<Rational, 2> v_;
};

/// r * Lambda_0.
class ScaleLattice {
 public:
  explicit ScaleLattice(Rational r = 1);
  const Rational& r() const { return r_; }

  /// Representative with v in [0, r)^2.
  PointC reduce(const PointC& p) const;
  bool contains(const PointC& p) const { return reduce(p).is_zero(); }
  /// p itself, or the generator r w1 when p = 0.
  PointC nonzero_rep(const PointC& p) const;
  /// Order of a torsion point mod the lattice.
  Integer order(const PointC& p) const;
  PointC generator(int k) const;

  friend bool operator==(const ScaleLattice& a, const ScaleLattice& b) { return a.r_ == b.r_; }
  friend bool operator!=(const ScaleLattice& a, const ScaleLattice& b) { return !(a == b); }

 private:
  Rational r_;
};

/// The smallest r * Lambda_0 contained in both lattices.
ScaleLattice common_sublattice(const ScaleLattice& a, const ScaleLattice& b);

/// Finitely supported Q-valued function on C.
class DiscFn {
 public:
  DiscFn() = default;

  Rational at(const PointC& z) const;
  void add(const PointC& z, const Rational& value);
  const std::map<PointC, Rational>& support() const { return support_; }
  bool is_zero() const { return support_.empty(); }

  friend bool operator==(const DiscFn& a, const DiscFn& b) { return a.support_ == b.support_; }

 private:
  std::map<PointC, Rational> support_;
};

/// Periodization of finitely many class representatives.
class PeriodicFn {
 public:
  explicit PeriodicFn(ScaleLattice lattice = ScaleLattice()) : lattice_(std::move(lattice)) {}

  const ScaleLattice& lattice() const { return lattice_; }
  const std::map<PointC, Rational>& reps() const { return reps_; }
  bool is_zero() const { return reps_.empty(); }
  bool is_torsion() const;

  Rational at(const PointC& z) const;
  void add(const PointC& z, const Rational& value);

  /// The same function described on n * lattice.
  PeriodicFn on_sublattice(long n) const;

  PeriodicFn& operator+=(const PeriodicFn& o);
  PeriodicFn& operator-=(const PeriodicFn& o);
  friend PeriodicFn operator+(PeriodicFn a, const PeriodicFn& b) { return a += b; }
  friend PeriodicFn operator-(PeriodicFn a, const PeriodicFn& b) { return a -= b; }
  PeriodicFn scaled(const Rational& s) const;

  /// Equality as functions on C.
  friend bool operator==(const PeriodicFn& a, const PeriodicFn& b);
  friend bool operator!=(const PeriodicFn& a, const PeriodicFn& b) { return !(a == b); }

 private:
  ScaleLattice lattice_;
  std::map<PointC, Rational> reps_;
};

/// z -> f(s z) on a plain function.
DiscFn scale_disc(const DiscFn& f, const Rational& s);

/// z -> f(s z), described on target. Requires s * target.r / f.r to be a
/// positive integer.
PeriodicFn pull_scale(const PeriodicFn& f, const Rational& s, const ScaleLattice& target);

/// z -> f(m z) on the same lattice.
PeriodicFn scale_periodic(const PeriodicFn& f, long m);

/// sum_{nu >= 1} alpha(z / q^nu), and 0 at z = 0.
Rational delta_value(const PeriodicFn& alpha, long q, const PointC& z);

/// delta_value evaluated on q^nu * rep for every rep of alpha and 1 <= nu <= depth.
DiscFn delta_from_alpha(const PeriodicFn& alpha, long q, int depth);

struct FundamentalSums {
  Rational total;
  PointC weighted;

  bool weighted_in(const ScaleLattice& lattice) const { return lattice.contains(weighted); }
};

/// Sums over one period cell. Throws if two generators carry weight.
FundamentalSums fundamental_sums(const PeriodicFn& f);

struct PeriodicCheck {
  bool ok = true;
  std::optional<PointC> witness;
};

/// Compares f(z + lambda) with f(z) for z in the support and the probes and
/// lambda = +-r w1, +-r w2.
PeriodicCheck is_periodic(const DiscFn& f, const ScaleLattice& lattice, const std::vector<PointC>& probe = {});

/// r_1 .. r_count for the relation f_p(z) = sum_i e_{m-i} f(p^{1-i} z), with e = (e_0, .., e_m).
std::vector<Rational> recursion_coeffs(const std::vector<Rational>& e, int count);

/// f(z) rebuilt from f_q: sum_{nu >= 1} f_q(z / q^nu).
Rational reconstruct_q(const PeriodicFn& f_q, long q, const PointC& z);
/// f(z) rebuilt from f_p: sum_{nu >= 1} r_nu f_p(z / p^nu).
Rational reconstruct_p(const PeriodicFn& f_p, const std::vector<Rational>& e, long p, const PointC& z);

struct PeriodicSolution {
  PeriodicFn f_tilde;
  ScaleLattice lattice;
  /// Value of f_tilde at the class of 0 (the reconstruction itself is 0 at z = 0).
  Rational mod_at_0;
};

/// No f exists. The witness, when found, is a point z != 0 with
/// reconstruct_q(z) != reconstruct_p(z).
struct Unsatisfiable {
  std::optional<PointC> witness;
};

using PeriodicityResult = std::variant<PeriodicSolution, Unsatisfiable>;

/// Finds the periodic f (up to its value at the class of 0) with
/// f(qz) - f(z) = f_q(z) and sum_i e_{m-i} f(p^{1-i} z) = f_p(z) for z != 0.
PeriodicityResult periodicity_solve(const PeriodicFn& f_p, const PeriodicFn& f_q, const std::vector<Rational>& e,
                                    long p, long q);

enum class NoDescentReason { Ord0, NonPeriodic };

struct NoDescent {
  NoDescentReason reason;
  /// The offending x q orbit of classes.
  std::vector<PointC> orbit;
};

struct DescentSolution {
  PeriodicFn delta;
  ScaleLattice lattice;
};

using DescentResult = std::variant<DescentSolution, NoDescent>;

/// Periodic delta with delta(qz) - delta(z) = alpha(z), on (q - 1) * lattice
/// so that delta satisfies Abel-Jacobi there.
DescentResult descent_solve(const PeriodicFn& alpha, long q);

}  // namespace elldiff
