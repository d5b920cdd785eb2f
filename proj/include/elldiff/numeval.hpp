#pragma once

#include <complex>
#include <utility>

#include "elldiff/laurent.hpp"
#include "elldiff/weierstrass.hpp"

namespace elldiff::num {

using Complex = std::complex<double>;

/// Oriented period basis: Im(w2 / w1) > 0.
struct PeriodPair {
  Complex w1;
  Complex w2;

  static PeriodPair make(Complex w1, Complex w2);
};

struct NumTol {
  double abs_tol = 1e-12;
  /// Maximum number of lattice rows (or q-expansion terms) summed.
  int lattice_cutoff = 60;

  static NumTol make(double abs_tol, int lattice_cutoff);
};

/// g2 = 60 sum' w^-4, g3 = 140 sum' w^-6.
std::pair<Complex, Complex> invariants_from_periods(const PeriodPair& L, const NumTol& tol = {});

/// wp, wp', zeta or sigma at z.
Complex eval(WKind kind, Complex z, const PeriodPair& L, const NumTol& tol = {});

/// (eta(w1), eta(w2)) with eta(w) = zeta(z + w) - zeta(z).
std::pair<Complex, Complex> eta_values(const PeriodPair& L, const NumTol& tol = {});

/// Distance from z to the nearest lattice point.
double lattice_distance(Complex z, const PeriodPair& L);

Complex to_complex(const Scalar& s);

/// Numeric value of a truncated series at z (the stored terms only).
Complex series_eval(const LaurentSeries& s, Complex z);

}  // namespace elldiff::num
