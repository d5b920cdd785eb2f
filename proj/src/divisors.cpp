#include "elldiff/divisors.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace elldiff {

namespace {

Rational mod_r(const Rational& v, const Rational& r) {
  Rational t = v / r;
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return v - r * Rational(fl);
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer ipow(long base, long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

long as_long(const Rational& x, const char* what) {
  if (x.get_den() != 1 || sgn(x) <= 0 || !x.get_num().fits_slong_p())
    throw DomainError(std::string(what) + " must be a positive integer");
  return x.get_num().get_si();
}

/// Which points can possibly meet the support of f: bounded torsion order
/// and, per generator, a lower bound on |c|.
struct Profile {
  Integer torsion_order = 0;
  std::map<std::string, Rational> min_abs_c;

  explicit Profile(const PeriodicFn& f) {
    for (const auto& [pt, val] : f.reps()) {
      if (pt.gen()) {
        Rational a = abs(pt.c());
        auto [it, fresh] = min_abs_c.emplace(*pt.gen(), a);
        if (!fresh && a < it->second) it->second = a;
      } else {
        Integer o = f.lattice().order(pt);
        torsion_order = torsion_order == 0 ? o : lcm(torsion_order, o);
      }
    }
  }

  bool may_hit(const PointC& w, const ScaleLattice& lattice) const {
    if (w.gen()) {
      auto it = min_abs_c.find(*w.gen());
      return it != min_abs_c.end() && abs(w.c()) >= it->second;
    }
    if (torsion_order == 0) return false;
    return mpz_divisible_p(torsion_order.get_mpz_t(), lattice.order(w).get_mpz_t()) != 0;
  }
};

/// sum_{nu >= 1} coef(nu) f(z / base^nu). Terminates because the order of
/// z / base^nu (or 1/|c|) only grows along the sequence.
Rational tail_sum(const PeriodicFn& f, const Profile& prof, long base, const PointC& z,
                  const std::function<Rational(int)>& coef) {
  Rational sum = 0;
  if (z.is_zero()) return sum;
  const Rational inv(1, base);
  PointC w = z;
  for (int nu = 1;; ++nu) {
    w = w.scaled(inv);
    if (!prof.may_hit(w, f.lattice())) break;
    Rational v = f.at(w);
    if (sgn(v) != 0) sum += coef(nu) * v;
  }
  return sum;
}

Rational one_coef(int) { return Rational(1); }

class PCoefs {
 public:
  explicit PCoefs(const std::vector<Rational>& e) : e_(e), r_(recursion_coeffs(e, 1)) {}
  Rational operator()(int nu) {
    if (static_cast<std::size_t>(nu) > r_.size()) r_ = recursion_coeffs(e_, nu + 8);
    return r_[nu - 1];
  }

 private:
  std::vector<Rational> e_;
  std::vector<Rational> r_;
};

void check_e(const std::vector<Rational>& e) {
  if (e.size() < 2) throw DomainError("relation needs e_0 .. e_m with m >= 1");
  if (e.back() != 1) throw DomainError("relation needs e_m = 1");
  if (sgn(e.front()) == 0) throw DomainError("relation needs e_0 != 0");
}

/// Candidate periodic solution of the q relation on the lattice of f_q, the
/// classes it may live on, and the classes where the relation fails.
struct QStage {
  PeriodicFn g;
  std::set<PointC> classes;
  std::vector<PointC> failures;
};

QStage q_stage(const PeriodicFn& fq, long q) {
  const ScaleLattice& lat = fq.lattice();
  Profile prof(fq);
  std::map<std::string, Rational> max_abs_c;
  for (const auto& [pt, val] : fq.reps()) {
    if (!pt.gen()) continue;
    auto [it, fresh] = max_abs_c.emplace(*pt.gen(), abs(pt.c()));
    if (!fresh && abs(pt.c()) > it->second) it->second = abs(pt.c());
  }

  QStage st{PeriodicFn(lat), {}, {}};
  st.classes.insert(PointC());
  std::vector<PointC> stack;
  for (const auto& [pt, val] : fq.reps()) stack.push_back(lat.reduce(pt.scaled(q)));
  while (!stack.empty()) {
    PointC w = stack.back();
    stack.pop_back();
    if (!st.classes.insert(w).second) continue;
    // a generator chain past the support carries a constant value; one step is enough to expose it
    if (w.gen() && abs(w.c()) > max_abs_c.at(*w.gen())) continue;
    stack.push_back(lat.reduce(w.scaled(q)));
  }
  for (const PointC& x : st.classes) {
    Rational v = tail_sum(fq, prof, q, lat.nonzero_rep(x), one_coef);
    if (sgn(v) != 0) st.g.add(x, v);
  }

  std::set<PointC> cand = st.classes;
  for (const auto& [pt, val] : fq.reps()) cand.insert(pt);
  const Rational inv(1, q);
  for (const PointC& x : st.classes)
    for (long a = 0; a < q; ++a)
      for (long b = 0; b < q; ++b) cand.insert(lat.reduce((x + PointC(lat.r() * a, lat.r() * b)).scaled(inv)));
  for (const PointC& z : cand) {
    PointC zr = lat.nonzero_rep(z);
    if (st.g.at(zr.scaled(q)) - st.g.at(zr) != fq.at(zr)) st.failures.push_back(zr);
  }
  return st;
}

/// Classes mod p^{m-1} * lattice where sum_i e_{m-i} g(p^{1-i} z) differs from f_p.
std::vector<PointC> p_failures(const PeriodicFn& g, const std::set<PointC>& classes, const PeriodicFn& fp,
                               const std::vector<Rational>& e, long p) {
  const long m = static_cast<long>(e.size()) - 1;
  const Rational& r = g.lattice().r();
  const long pm1 = ipow(p, m - 1).get_si();
  ScaleLattice fine(r * pm1);
  std::set<PointC> cand;
  auto lift = [&](const PointC& base, const Rational& step, long count) {
    for (long a = 0; a < count; ++a)
      for (long b = 0; b < count; ++b) cand.insert(fine.reduce(base + PointC(step * a, step * b)));
  };
  const Rational inv(1, p);
  for (const PointC& x : classes) {
    for (long a = 0; a < p; ++a)
      for (long b = 0; b < p; ++b) lift((x + PointC(r * a, r * b)).scaled(inv), r, pm1);
    lift(x, r, pm1);
    for (long j = 1; j <= m - 1; ++j) {
      Rational pj(ipow(p, j));
      lift(x.scaled(pj), r * pj, ipow(p, m - 1 - j).get_si());
    }
  }
  for (const auto& [pt, val] : fp.reps()) lift(pt, r, pm1);

  std::vector<PointC> out;
  for (const PointC& z : cand) {
    PointC zr = fine.nonzero_rep(z);
    Rational sum = 0;
    Rational scale(p);
    for (long i = 0; i <= m; ++i) {
      sum += e[m - i] * g.at(zr.scaled(scale));
      scale /= p;
    }
    if (sum != fp.at(zr)) out.push_back(zr);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- PointC

PointC::PointC(Rational v1, Rational v2) : v_{std::move(v1), std::move(v2)} {
  v_[0].canonicalize();
  v_[1].canonicalize();
}

PointC::PointC(std::string gen, Rational c, Rational v1, Rational v2)
    : PointC(std::move(c), std::optional<std::string>(std::move(gen)), {std::move(v1), std::move(v2)}) {}

PointC::PointC(Rational c, std::optional<std::string> gen, std::array<Rational, 2> v)
    : c_(std::move(c)), gen_(std::move(gen)), v_(std::move(v)) {
  c_.canonicalize();
  v_[0].canonicalize();
  v_[1].canonicalize();
  if (!gen_ && sgn(c_) != 0) throw DomainError("a point without generator must have c = 0");
  if (gen_ && sgn(c_) == 0) gen_.reset();
}

PointC PointC::scaled(const Rational& s) const { return PointC(c_ * s, gen_, {v_[0] * s, v_[1] * s}); }

PointC operator+(const PointC& a, const PointC& b) {
  if (a.gen_ && b.gen_ && *a.gen_ != *b.gen_)
    throw DomainError("points with different generators have no PointC sum");
  return PointC(a.c_ + b.c_, a.gen_ ? a.gen_ : b.gen_, {a.v_[0] + b.v_[0], a.v_[1] + b.v_[1]});
}

bool operator<(const PointC& a, const PointC& b) {
  if (a.gen_ != b.gen_) return a.gen_ < b.gen_;
  if (a.c_ != b.c_) return a.c_ < b.c_;
  if (a.v_[0] != b.v_[0]) return a.v_[0] < b.v_[0];
  return a.v_[1] < b.v_[1];
}

std::ostream& operator<<(std::ostream& os, const PointC& p) {
  if (p.gen_) os << to_string(p.c_) << "*" << *p.gen_ << "+";
  return os << "(" << to_string(p.v_[0]) << "," << to_string(p.v_[1]) << ")";
}

// ---------------------------------------------------------------- lattices

ScaleLattice::ScaleLattice(Rational r) : r_(std::move(r)) {
  if (sgn(r_) <= 0) throw DomainError("lattice scale must be positive");
}

PointC ScaleLattice::reduce(const PointC& p) const {
  return PointC(p.c(), p.gen(), {mod_r(p.v()[0], r_), mod_r(p.v()[1], r_)});
}

PointC ScaleLattice::nonzero_rep(const PointC& p) const { return p.is_zero() ? generator(0) : p; }

Integer ScaleLattice::order(const PointC& p) const {
  if (p.gen()) throw DomainError("non-torsion point has no finite order");
  Rational a = p.v()[0] / r_;
  Rational b = p.v()[1] / r_;
  return lcm(a.get_den(), b.get_den());
}

PointC ScaleLattice::generator(int k) const { return k == 0 ? PointC(r_, Rational(0)) : PointC(Rational(0), r_); }

ScaleLattice common_sublattice(const ScaleLattice& a, const ScaleLattice& b) {
  const Rational& x = a.r();
  const Rational& y = b.r();
  return ScaleLattice(Rational(lcm(x.get_num(), y.get_num()), gcd(x.get_den(), y.get_den())));
}

// ---------------------------------------------------------------- functions

Rational DiscFn::at(const PointC& z) const {
  auto it = support_.find(z);
  return it == support_.end() ? Rational(0) : it->second;
}

void DiscFn::add(const PointC& z, const Rational& value) {
  if (sgn(value) == 0) return;
  auto [it, fresh] = support_.emplace(z, value);
  if (fresh) return;
  it->second += value;
  if (sgn(it->second) == 0) support_.erase(it);
}

bool PeriodicFn::is_torsion() const {
  return std::all_of(reps_.begin(), reps_.end(), [](const auto& kv) { return kv.first.is_torsion(); });
}

Rational PeriodicFn::at(const PointC& z) const {
  auto it = reps_.find(lattice_.reduce(z));
  return it == reps_.end() ? Rational(0) : it->second;
}

void PeriodicFn::add(const PointC& z, const Rational& value) {
  if (sgn(value) == 0) return;
  auto [it, fresh] = reps_.emplace(lattice_.reduce(z), value);
  if (fresh) return;
  it->second += value;
  if (sgn(it->second) == 0) reps_.erase(it);
}

PeriodicFn PeriodicFn::on_sublattice(long n) const {
  if (n < 1) throw DomainError("sublattice index must be positive");
  if (n == 1) return *this;
  return pull_scale(*this, 1, ScaleLattice(lattice_.r() * n));
}

PeriodicFn& PeriodicFn::operator+=(const PeriodicFn& o) {
  ScaleLattice lat = common_sublattice(lattice_, o.lattice_);
  if (lat != lattice_) *this = on_sublattice(as_long(lat.r() / lattice_.r(), "index"));
  PeriodicFn other = o.on_sublattice(as_long(lat.r() / o.lattice_.r(), "index"));
  for (const auto& [pt, val] : other.reps_) add(pt, val);
  return *this;
}

PeriodicFn& PeriodicFn::operator-=(const PeriodicFn& o) { return *this += o.scaled(-1); }

PeriodicFn PeriodicFn::scaled(const Rational& s) const {
  PeriodicFn out(lattice_);
  if (sgn(s) == 0) return out;
  for (const auto& [pt, val] : reps_) out.reps_.emplace(pt, val * s);
  return out;
}

bool operator==(const PeriodicFn& a, const PeriodicFn& b) {
  ScaleLattice lat = common_sublattice(a.lattice_, b.lattice_);
  return a.on_sublattice(as_long(lat.r() / a.lattice_.r(), "index")).reps_ ==
         b.on_sublattice(as_long(lat.r() / b.lattice_.r(), "index")).reps_;
}

DiscFn scale_disc(const DiscFn& f, const Rational& s) {
  if (sgn(s) <= 0) throw DomainError("scale must be positive");
  DiscFn out;
  Rational inv = 1 / s;
  for (const auto& [pt, val] : f.support()) out.add(pt.scaled(inv), val);
  return out;
}

PeriodicFn pull_scale(const PeriodicFn& f, const Rational& s, const ScaleLattice& target) {
  const Rational& r = f.lattice().r();
  long k = as_long(s * target.r() / r, "s * target / source");
  Rational inv = 1 / s;
  PeriodicFn out(target);
  for (const auto& [pt, val] : f.reps())
    for (long a = 0; a < k; ++a)
      for (long b = 0; b < k; ++b) out.add((pt + PointC(r * a, r * b)).scaled(inv), val);
  return out;
}

PeriodicFn scale_periodic(const PeriodicFn& f, long m) {
  if (m < 1) throw DomainError("scale_periodic needs m >= 1");
  return pull_scale(f, m, f.lattice());
}

Rational delta_value(const PeriodicFn& alpha, long q, const PointC& z) { return reconstruct_q(alpha, q, z); }

DiscFn delta_from_alpha(const PeriodicFn& alpha, long q, int depth) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!alpha.is_torsion()) throw DomainError("delta_from_alpha supports torsion alpha only; use periodicity_solve");
  const ScaleLattice& lat = alpha.lattice();
  Profile prof(alpha);
  std::set<PointC> points;
  for (const auto& [pt, val] : alpha.reps()) {
    std::set<PointC> seen;
    PointC w = pt;
    for (int nu = 1; nu <= depth; ++nu) {
      w = w.scaled(q);
      if (w.is_zero() || !seen.insert(lat.reduce(w)).second) break;
      points.insert(w);
    }
  }
  DiscFn out;
  for (const PointC& z : points) out.add(z, tail_sum(alpha, prof, q, z, one_coef));
  return out;
}

FundamentalSums fundamental_sums(const PeriodicFn& f) {
  FundamentalSums out;
  for (const auto& [pt, val] : f.reps()) {
    out.total += val;
    out.weighted = out.weighted + pt.scaled(val);
  }
  return out;
}

PeriodicCheck is_periodic(const DiscFn& f, const ScaleLattice& lattice, const std::vector<PointC>& probe) {
  std::set<PointC> points(probe.begin(), probe.end());
  for (const auto& [pt, val] : f.support()) points.insert(pt);
  for (const PointC& z : points)
    for (int k = 0; k < 2; ++k)
      for (int sign : {1, -1}) {
        PointC t = z + lattice.generator(k).scaled(sign);
        if (f.at(t) != f.at(z)) return {false, t};
      }
  return {};
}

std::vector<Rational> recursion_coeffs(const std::vector<Rational>& e, int count) {
  check_e(e);
  const int m = static_cast<int>(e.size()) - 1;
  std::vector<Rational> r;
  for (int n = 1; n <= count; ++n) {
    if (n == 1) {
      r.emplace_back(1);
      continue;
    }
    Rational v = 0;
    for (int i = 1; i <= std::min(m, n - 1); ++i) v -= e[m - i] * r[n - i - 1];
    r.push_back(v);
  }
  return r;
}

Rational reconstruct_q(const PeriodicFn& f_q, long q, const PointC& z) {
  if (q < 2) throw DomainError("q must be at least 2");
  return tail_sum(f_q, Profile(f_q), q, z, one_coef);
}

Rational reconstruct_p(const PeriodicFn& f_p, const std::vector<Rational>& e, long p, const PointC& z) {
  if (p < 2) throw DomainError("p must be at least 2");
  PCoefs coefs(e);
  return tail_sum(f_p, Profile(f_p), p, z, std::ref(coefs));
}

PeriodicityResult periodicity_solve(const PeriodicFn& f_p, const PeriodicFn& f_q, const std::vector<Rational>& e,
                                    long p, long q) {
  if (p < 2 || q < 2) throw DomainError("p and q must be at least 2");
  if (std::gcd(p, q) != 1) throw DomainError("p and q must be coprime");
  check_e(e);
  const long m = static_cast<long>(e.size()) - 1;
  ScaleLattice lat = common_sublattice(f_p.lattice(), f_q.lattice());
  PeriodicFn fp = f_p.on_sublattice(as_long(lat.r() / f_p.lattice().r(), "index"));
  PeriodicFn fq = f_q.on_sublattice(as_long(lat.r() / f_q.lattice().r(), "index"));

  QStage st = q_stage(fq, q);
  std::vector<PointC> pf = p_failures(st.g, st.classes, fp, e, p);

  if (st.failures.empty() && pf.empty()) {
    // proof scaling q^{2 n_q} for the part away from torsion
    long nq = -1;
    for (const auto& [pt, val] : fq.reps()) {
      if (!pt.gen()) continue;
      long best = 0;
      Rational bound = 0;
      for (const auto& [other, v2] : fq.reps())
        if (other.gen() == pt.gen()) bound = std::max(bound, Rational(abs(other.c())));
      PointC w = pt;
      for (long n = 1; abs(w.c()) <= bound; ++n) {
        w = lat.reduce(w.scaled(q));
        if (fq.reps().count(w)) best = n;
      }
      nq = std::max(nq, best);
    }
    PeriodicFn ft = st.g;
    if (nq >= 0) ft = ft.on_sublattice(ipow(q, 2 * (nq + 1)).get_si());
    Rational at0 = st.g.at(PointC());
    return PeriodicSolution{ft, ft.lattice(), at0};
  }

  PCoefs coefs(e);
  Profile qprof(fq);
  Profile pprof(fp);
  std::vector<PointC> cand;
  for (const PointC& z : st.failures) {
    PointC a = z.scaled(q);
    cand.push_back(z);
    cand.push_back(a);
    cand.push_back(lat.nonzero_rep(lat.reduce(a)));
    for (int k = 0; k < 2; ++k) {
      cand.push_back(a + lat.generator(k));
      cand.push_back(a - lat.generator(k));
    }
  }
  for (const PointC& z : pf) {
    Rational scale(p);
    for (long i = 0; i <= m; ++i, scale /= p) cand.push_back(z.scaled(scale));
  }
  for (const PointC& x : st.classes) cand.push_back(lat.nonzero_rep(x));
  for (const PointC& z : cand) {
    if (z.is_zero()) continue;
    if (tail_sum(fq, qprof, q, z, one_coef) != tail_sum(fp, pprof, p, z, std::ref(coefs))) return Unsatisfiable{z};
  }
  return Unsatisfiable{};
}

DescentResult descent_solve(const PeriodicFn& alpha, long q) {
  if (q < 2) throw DomainError("q must be at least 2");
  if (!alpha.is_torsion()) throw DomainError("descent_solve needs torsion-supported alpha");
  if (sgn(alpha.at(PointC())) != 0) return NoDescent{NoDescentReason::Ord0, {PointC()}};
  FundamentalSums sums = fundamental_sums(alpha);
  if (sgn(sums.total) != 0) throw DomainError("alpha has nonzero degree");
  if (!sums.weighted_in(alpha.lattice())) throw DomainError("alpha violates Abel-Jacobi: weighted sum not in lattice");

  QStage st = q_stage(alpha, q);
  if (!st.failures.empty()) {
    const ScaleLattice& lat = alpha.lattice();
    std::vector<PointC> orbit;
    std::set<PointC> seen;
    for (PointC w = lat.reduce(st.failures.front()); seen.insert(w).second; w = lat.reduce(w.scaled(q)))
      orbit.push_back(w);
    return NoDescent{NoDescentReason::NonPeriodic, orbit};
  }
  if (sgn(fundamental_sums(st.g).total) != 0) throw std::logic_error("periodic delta has nonzero degree");
  PeriodicFn delta = st.g.on_sublattice(q - 1);
  if (!fundamental_sums(delta).weighted_in(delta.lattice()))
    throw std::logic_error("delta fails Abel-Jacobi on (q - 1) * lattice");
  return DescentSolution{delta, delta.lattice()};
}

}  // namespace elldiff
