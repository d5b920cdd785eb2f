#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "elldiff/diffmod.hpp"
#include "elldiff/divisors.hpp"
#include "elldiff/isogeny.hpp"
#include "elldiff/laurent.hpp"

namespace elldiff::io {

using nlohmann::json;

/// Malformed input; pointer is a JSON pointer to the offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : std::runtime_error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// A JSON value together with its location in the request.
struct Node {
  const json& j;
  std::string ptr;

  Node at(const std::string& key) const;
  Node at(std::size_t index) const;
  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(ptr.empty() ? "/" : ptr, what); }

  const json& object() const;
  const json& array() const;
  long integer() const;
  std::string string() const;
  double number() const;
  bool boolean() const;
};

json encode(const Rational& r);
json encode(const Scalar& s);
json encode(const SPoly& p);
json encode(const EllFn& f);
json encode(const LaurentSeries& s);
json encode(const PointC& p);
json encode(const PeriodicFn& f);
json encode(const PointXY& p);
json encode(const EMat& m);
json encode(const SMat& m);
json encode(const DiffSystem& s);
json encode(std::complex<double> z);

Rational decode_rational(const Node& n);
Scalar decode_scalar(const Node& n);
SPoly decode_poly(const Node& n);
EllFn decode_ellfn(const Node& n, const CurveRef& curve);
LaurentSeries decode_series(const Node& n);
PointC decode_pointc(const Node& n);
PeriodicFn decode_periodic(const Node& n);
PointXY decode_pointxy(const Node& n, const CurveRef& curve);
EMat decode_emat(const Node& n, const CurveRef& curve);
DiffSystem decode_system(const Node& n, const CurveRef& curve);
std::complex<double> decode_complex(const Node& n);

/// Curve from the "g2" and "g3" fields of an object.
CurveRef decode_curve(const Node& n);

}  // namespace elldiff::io
