#include "elldiff/json_io.hpp"

#include <cmath>

namespace elldiff::io {

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

template <typename F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const DomainError& e) {
    n.fail(e.what());
  }
}

}  // namespace

Node Node::at(const std::string& key) const {
  const json& o = object();
  auto it = o.find(key);
  if (it == o.end()) fail("missing field \"" + key + "\"");
  return {*it, ptr + "/" + escape(key)};
}

Node Node::at(std::size_t index) const {
  const json& a = array();
  if (index >= a.size()) fail("index out of range");
  return {a[index], ptr + "/" + std::to_string(index)};
}

const json& Node::object() const {
  if (!j.is_object()) fail("expected an object");
  return j;
}

const json& Node::array() const {
  if (!j.is_array()) fail("expected an array");
  return j;
}

long Node::integer() const {
  if (!j.is_number_integer()) fail("expected an integer");
  return j.get<long>();
}

std::string Node::string() const {
  if (!j.is_string()) fail("expected a string");
  return j.get<std::string>();
}

double Node::number() const {
  if (!j.is_number()) fail("expected a number");
  return j.get<double>();
}

bool Node::boolean() const {
  if (!j.is_boolean()) fail("expected a boolean");
  return j.get<bool>();
}

json encode(const Rational& r) { return to_string(r); }

json encode(const Scalar& s) { return {{"re", to_string(s.re())}, {"im", to_string(s.im())}}; }

json encode(const SPoly& p) {
  json out = json::array();
  for (const Scalar& c : p.coeffs()) out.push_back(encode(c));
  return out;
}

json encode(const EllFn& f) {
  auto rat = [](const SRatFn& r) { return json{{"num", encode(r.num())}, {"den", encode(r.den())}}; };
  return {{"a", rat(f.a())}, {"b", rat(f.b())}};
}

json encode(const LaurentSeries& s) {
  json coeffs = json::array();
  for (const Scalar& c : s.stored()) coeffs.push_back(encode(c));
  int val = s.is_zero() ? (s.is_exact() ? 0 : s.trunc()) : s.val();
  return {{"val", val}, {"trunc", s.is_exact() ? json(nullptr) : json(s.trunc())}, {"coeffs", coeffs}};
}

json encode(const PointC& p) {
  return {{"c", encode(p.c())},
          {"gen", p.gen() ? json(*p.gen()) : json(nullptr)},
          {"v", json::array({encode(p.v()[0]), encode(p.v()[1])})}};
}

json encode(const PeriodicFn& f) {
  json reps = json::array();
  for (const auto& [pt, v] : f.reps()) reps.push_back({{"point", encode(pt)}, {"val", encode(v)}});
  return {{"r", encode(f.lattice().r())}, {"reps", reps}};
}

json encode(const PointXY& p) {
  if (p.is_infinity()) return "infinity";
  return {{"x", encode(p.x())}, {"y", encode(p.y())}};
}

json encode(const EMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json encode(const SMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json encode(const DiffSystem& s) { return {{"scale", s.scale}, {"A", encode(s.A)}}; }

json encode(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Rational decode_rational(const Node& n) {
  if (n.j.is_number_integer()) return Rational(n.j.get<long>());
  return guarded(n, [&] { return parse_rational(n.string()); });
}

Scalar decode_scalar(const Node& n) {
  if (n.j.is_object()) {
    Rational re = n.has("re") ? decode_rational(n.at("re")) : Rational(0);
    Rational im = n.has("im") ? decode_rational(n.at("im")) : Rational(0);
    for (const auto& [k, v] : n.j.items()) {
      if (k != "re" && k != "im") n.fail("unexpected field \"" + k + "\"");
    }
    return {re, im};
  }
  if (n.j.is_string() || n.j.is_number_integer()) return Scalar(decode_rational(n));
  n.fail("expected a scalar (\"p/q\" or {\"re\", \"im\"})");
}

SPoly decode_poly(const Node& n) {
  std::vector<Scalar> cs;
  for (std::size_t i = 0; i < n.array().size(); ++i) cs.push_back(decode_scalar(n.at(i)));
  return SPoly(std::move(cs));
}

EllFn decode_ellfn(const Node& n, const CurveRef& curve) {
  if (!n.j.is_object()) return EllFn(decode_scalar(n), curve);
  auto rat = [&](const std::string& key) -> SRatFn {
    if (!n.has(key)) return SRatFn();
    Node r = n.at(key);
    SPoly num = decode_poly(r.at("num"));
    SPoly den = r.has("den") ? decode_poly(r.at("den")) : SPoly(Scalar(1));
    if (den.is_zero()) r.at("den").fail("zero denominator");
    return SRatFn(num, den);
  };
  if (!n.has("a") && !n.has("b")) n.fail("EllFn needs \"a\" or \"b\"");
  SRatFn a = rat("a"), b = rat("b");
  return EllFn(a, b, curve);
}

LaurentSeries decode_series(const Node& n) {
  long val = n.at("val").integer();
  int trunc = kExact;
  Node t = n.at("trunc");
  if (!t.j.is_null()) {
    long tv = t.integer();
    if (std::abs(tv) > 100000) t.fail("truncation out of range");
    trunc = static_cast<int>(tv);
  }
  if (std::abs(val) > 100000) n.at("val").fail("valuation out of range");
  std::vector<Scalar> cs;
  Node c = n.at("coeffs");
  for (std::size_t i = 0; i < c.array().size(); ++i) cs.push_back(decode_scalar(c.at(i)));
  if (trunc != kExact && val + static_cast<long>(cs.size()) > trunc && !cs.empty())
    n.fail("coefficients extend past the truncation");
  return LaurentSeries(static_cast<int>(val), trunc, std::move(cs));
}

PointC decode_pointc(const Node& n) {
  Rational c = n.has("c") ? decode_rational(n.at("c")) : Rational(0);
  std::optional<std::string> gen;
  if (n.has("gen") && !n.at("gen").j.is_null()) gen = n.at("gen").string();
  Node v = n.at("v");
  if (v.array().size() != 2) v.fail("expected two coordinates");
  std::array<Rational, 2> vv{decode_rational(v.at(0)), decode_rational(v.at(1))};
  if (!gen) {
    if (sgn(c) != 0) n.fail("nonzero \"c\" needs a generator");
    return PointC(vv[0], vv[1]);
  }
  return guarded(n, [&] { return PointC(c, gen, vv); });
}

PeriodicFn decode_periodic(const Node& n) {
  Rational r = n.has("r") ? decode_rational(n.at("r")) : Rational(1);
  if (sgn(r) <= 0) n.at("r").fail("lattice scale must be positive");
  PeriodicFn f{ScaleLattice(r)};
  Node reps = n.at("reps");
  for (std::size_t i = 0; i < reps.array().size(); ++i) {
    Node e = reps.at(i);
    PointC p = decode_pointc(e.at("point"));
    f.add(p, decode_rational(e.at("val")));
  }
  return f;
}

PointXY decode_pointxy(const Node& n, const CurveRef& curve) {
  if (n.j.is_string()) {
    if (n.string() != "infinity") n.fail("expected \"infinity\" or {\"x\", \"y\"}");
    return PointXY::infinity(curve);
  }
  Scalar x = decode_scalar(n.at("x")), y = decode_scalar(n.at("y"));
  return PointXY(curve, x, y);
}

EMat decode_emat(const Node& n, const CurveRef& curve) {
  const json& rows = n.array();
  if (rows.empty()) n.fail("empty matrix");
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t c = n.at(i).array().size();
    if (i == 0) cols = c;
    if (c != cols || c == 0) n.at(i).fail("ragged or empty row");
  }
  EMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = decode_ellfn(n.at(i).at(j), curve);
  return m;
}

DiffSystem decode_system(const Node& n, const CurveRef& curve) {
  long scale = n.at("scale").integer();
  EMat A = decode_emat(n.at("A"), curve);
  return DiffSystem::make(std::move(A), scale);
}

std::complex<double> decode_complex(const Node& n) {
  if (n.j.is_number()) return {n.number(), 0.0};
  double re = n.has("re") ? n.at("re").number() : 0.0;
  double im = n.has("im") ? n.at("im").number() : 0.0;
  return {re, im};
}

CurveRef decode_curve(const Node& n) {
  Scalar g2 = decode_scalar(n.at("g2"));
  Scalar g3 = decode_scalar(n.at("g3"));
  return make_curve(g2, g3);
}

}  // namespace elldiff::io
