#include "elldiff/cli.hpp"

#include <functional>
#include <map>
#include <set>

#include "elldiff/json_io.hpp"
#include "elldiff/numeval.hpp"

namespace elldiff::cli {

namespace {

using io::decode_curve;
using io::encode;
using io::Node;
using io::SchemaError;
using nlohmann::json;

using Diagnostics = std::vector<std::string>;
using Handler = std::function<json(const Node&, const Options&, Diagnostics&)>;

void allow(const Node& n, std::initializer_list<const char*> keys) {
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : n.object().items()) {
    if (!ok.count(k)) n.fail("unexpected field \"" + k + "\"");
  }
}

long positive(const Node& n, long lo, long hi) {
  long v = n.integer();
  if (v < lo || v > hi) n.fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

int order_of(const Node& p, const Options& o, int fallback) {
  if (o.order) {
    if (*o.order < 8 || *o.order > 400) throw DomainError("--order must lie in [8, 400]");
    return *o.order;
  }
  if (p.has("order")) return static_cast<int>(positive(p.at("order"), 8, 400));
  return fallback;
}

WKind kind_of(const Node& n) {
  static const std::map<std::string, WKind> kinds{
      {"wp", WKind::Wp}, {"wp_prime", WKind::WpPrime}, {"zeta", WKind::Zeta}, {"sigma", WKind::Sigma}};
  auto it = kinds.find(n.string());
  if (it == kinds.end()) n.fail("expected one of wp, wp_prime, zeta, sigma");
  return it->second;
}

json encode_orbit(const std::vector<PointC>& orbit) {
  json out = json::array();
  for (const PointC& p : orbit) out.push_back(encode(p));
  return out;
}

json cmd_series(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"kind", "g2", "g3", "order", "f"});
  CurveRef curve = decode_curve(p);
  int order = order_of(p, o, 20);
  if (p.at("kind").j == "embed") return {{"series", encode(embed(io::decode_ellfn(p.at("f"), curve), order))}};
  if (p.has("f")) p.at("f").fail("\"f\" is only used with kind \"embed\"");
  return {{"series", encode(weierstrass_series(*curve, kind_of(p.at("kind")), order))}};
}

json cmd_pullback(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"g2", "g3", "f", "m", "order"});
  CurveRef curve = decode_curve(p);
  EllFn f = io::decode_ellfn(p.at("f"), curve);
  int m = static_cast<int>(positive(p.at("m"), 1, 64));
  EllFn fm = pullback(f, m);
  json out{{"m", m}, {"pullback", encode(fm)}};
  if (o.order || p.has("order")) {
    int order = order_of(p, o, 20);
    out["series_check"] = embed(fm, order) == scale_arg(embed(f, order), m);
  }
  return out;
}

json cmd_gq(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"g2", "g3", "q", "order"});
  CurveRef curve = decode_curve(p);
  int q = static_cast<int>(positive(p.at("q"), 2, 64));
  EllFn g = g_element(curve, q);
  return {{"q", q}, {"g", encode(g)}, {"series", encode(embed(g, order_of(p, o, 12)))}};
}

json cmd_periodicity(const Node& p, const Options&, Diagnostics& diag) {
  allow(p, {"f_p", "f_q", "e", "p", "q"});
  PeriodicFn fp = io::decode_periodic(p.at("f_p"));
  PeriodicFn fq = io::decode_periodic(p.at("f_q"));
  std::vector<Rational> e;
  Node en = p.at("e");
  for (std::size_t i = 0; i < en.array().size(); ++i) e.push_back(io::decode_rational(en.at(i)));
  long pp = positive(p.at("p"), 2, 1000), qq = positive(p.at("q"), 2, 1000);
  PeriodicityResult r = periodicity_solve(fp, fq, e, pp, qq);
  if (auto* s = std::get_if<PeriodicSolution>(&r)) {
    return {{"status", "solution"},
            {"f_tilde", encode(s->f_tilde)},
            {"lattice", encode(s->lattice.r())},
            {"mod_at_0", encode(s->mod_at_0)}};
  }
  const auto& u = std::get<Unsatisfiable>(r);
  if (!u.witness) diag.emplace_back("no periodic solution; no explicit witness point found");
  return {{"status", "unsatisfiable"}, {"witness", u.witness ? encode(*u.witness) : json(nullptr)}};
}

json cmd_descent(const Node& p, const Options&, Diagnostics&) {
  allow(p, {"alpha", "q"});
  PeriodicFn alpha = io::decode_periodic(p.at("alpha"));
  long q = positive(p.at("q"), 2, 1000);
  DescentResult r = descent_solve(alpha, q);
  if (auto* nd = std::get_if<NoDescent>(&r)) {
    return {{"verdict", "psi_transcendental"},
            {"reason", nd->reason == NoDescentReason::Ord0 ? "ord0" : "no_descent_orbit"},
            {"orbit", encode_orbit(nd->orbit)}};
  }
  const auto& s = std::get<DescentSolution>(r);
  return {{"verdict", "descends"}, {"delta", encode(s.delta)}, {"lattice", encode(s.lattice.r())}};
}

json cmd_verdict(const Node& p, const Options&, Diagnostics& diag) {
  allow(p, {"alpha", "q", "g2", "g3", "a", "labels"});
  PeriodicFn alpha = io::decode_periodic(p.at("alpha"));
  long q = positive(p.at("q"), 2, 1000);
  CurveRef curve;
  if (p.has("a") || p.has("labels") || p.has("g2") || p.has("g3")) curve = decode_curve(p);
  std::optional<EllFn> a;
  if (p.has("a")) a = io::decode_ellfn(p.at("a"), curve);
  PointLabels labels;
  if (p.has("labels")) {
    Node ls = p.at("labels");
    for (std::size_t i = 0; i < ls.array().size(); ++i) {
      Node l = ls.at(i);
      labels.emplace_back(io::decode_pointc(l.at("point")), io::decode_pointxy(l.at("xy"), curve));
    }
  }
  VerdictOrderOne v = order_one_verdict(alpha, a, labels, q);
  static const std::map<VerdictKind, const char*> kinds{{VerdictKind::Descends, "descends"},
                                                        {VerdictKind::PsiTranscendental, "psi_transcendental"},
                                                        {VerdictKind::Inconclusive, "inconclusive"}};
  static const std::map<VerdictReason, const char*> reasons{{VerdictReason::Ord0, "ord0"},
                                                            {VerdictReason::NoDescentOrbit, "no_descent_orbit"},
                                                            {VerdictReason::InconclusiveBounds, "inconclusive_bounds"}};
  if (!v.note.empty()) diag.push_back(v.note);
  return {{"verdict", kinds.at(v.kind)},
          {"reason", v.reason == VerdictReason::None ? json(nullptr) : json(reasons.at(v.reason))},
          {"delta", v.delta ? encode(*v.delta) : json(nullptr)},
          {"b", v.b ? encode(*v.b) : json(nullptr)},
          {"c", v.c ? encode(*v.c) : json(nullptr)},
          {"orbit", encode_orbit(v.orbit)}};
}

json cmd_isomonodromy(const Node& p, const Options&, Diagnostics&) {
  allow(p, {"g2", "g3", "phi", "psi"});
  CurveRef curve = decode_curve(p);
  DiffSystem phi = io::decode_system(p.at("phi"), curve);
  DiffSystem psi = io::decode_system(p.at("psi"), curve);
  return {{"compatible", isomonodromy_check(CompatPair::make(phi, psi))}};
}

json cmd_verify_pv(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"g2", "g3", "q", "p", "order"});
  CurveRef curve = decode_curve(p);
  long q = positive(p.at("q"), 2, 16), pp = positive(p.at("p"), 2, 16);
  int order = order_of(p, o, 40);
  PvExample phi = pv_example_system(curve, q, order + 4);
  PvExample psi = pv_example_system(curve, pp, order + 4);
  json systems = json::array();
  bool all = true;
  int reached = kExact;
  for (const PvExample* ex : {&phi, &psi}) {
    SystemCheck c = verify_system(embed_matrix(ex->A.A, order + 4), ex->U, ex->A.scale);
    all = all && c.passed && c.order >= order;
    reached = std::min(reached, c.order);
    systems.push_back({{"m", ex->A.scale}, {"passed", c.passed}, {"order", c.order}, {"A", encode(ex->A.A)}});
  }
  bool compatible = isomonodromy_check(CompatPair::make(phi.A, psi.A));
  HResult h = h_matrix(phi.U, psi.A, pp);
  json hj;
  if (auto* hc = std::get_if<HConstant>(&h)) {
    hj = {{"constant", true}, {"matrix", encode(hc->h)}, {"order", hc->order}};
  } else {
    const auto& nc = std::get<HNotConstant>(h);
    hj = {{"constant", false}, {"row", nc.row}, {"col", nc.col}, {"exponent", nc.order}};
  }
  return {{"residual_zero", all}, {"order", reached}, {"systems", systems}, {"compatible", compatible}, {"h", hj}};
}

json cmd_membership(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"g2", "g3", "series", "kind", "order", "bounds"});
  CurveRef curve = decode_curve(p);
  MembershipBounds b;
  if (p.has("bounds")) {
    Node bn = p.at("bounds");
    allow(bn, {"max_zeta_pow", "max_z_range", "max_pole_order"});
    if (bn.has("max_zeta_pow")) b.max_zeta_pow = static_cast<int>(positive(bn.at("max_zeta_pow"), 0, 8));
    if (bn.has("max_z_range")) b.max_z_range = static_cast<int>(positive(bn.at("max_z_range"), 0, 16));
    if (bn.has("max_pole_order")) b.max_pole_order = static_cast<int>(positive(bn.at("max_pole_order"), 0, 64));
  }
  LaurentSeries f;
  if (p.has("series")) {
    if (p.has("kind")) p.at("kind").fail("give either \"series\" or \"kind\"");
    f = io::decode_series(p.at("series"));
  } else {
    f = weierstrass_series(*curve, kind_of(p.at("kind")), order_of(p, o, membership_dimension(b) + 10));
  }
  std::optional<SElement> s = s_membership(f, curve, b);
  json cert = nullptr;
  if (s) {
    cert = json::array();
    for (const auto& [ij, k] : s->terms) cert.push_back({{"z_pow", ij.first}, {"zeta_pow", ij.second}, {"coeff", encode(k)}});
  }
  return {{"member", s.has_value()}, {"dimension", membership_dimension(b)}, {"certificate", cert}};
}

json cmd_numeval(const Node& p, const Options& o, Diagnostics&) {
  allow(p, {"op", "w1", "w2", "kind", "z"});
  num::NumTol tol = num::NumTol::make(o.tol.value_or(1e-12), o.cutoff.value_or(60));
  num::PeriodPair L = num::PeriodPair::make(io::decode_complex(p.at("w1")), io::decode_complex(p.at("w2")));
  std::string op = p.at("op").string();
  if (op == "invariants") {
    auto [g2, g3] = num::invariants_from_periods(L, tol);
    return {{"g2", encode(g2)}, {"g3", encode(g3)}};
  }
  if (op == "eval") return {{"value", encode(num::eval(kind_of(p.at("kind")), io::decode_complex(p.at("z")), L, tol))}};
  if (op == "eta") {
    auto [e1, e2] = num::eta_values(L, tol);
    return {{"eta1", encode(e1)}, {"eta2", encode(e2)}};
  }
  p.at("op").fail("expected one of invariants, eval, eta");
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"series", cmd_series},
      {"pullback", cmd_pullback},
      {"gq", cmd_gq},
      {"periodicity", cmd_periodicity},
      {"descent", cmd_descent},
      {"verdict-order1", cmd_verdict},
      {"isomonodromy", cmd_isomonodromy},
      {"verify-pv-example", cmd_verify_pv},
      {"s-membership", cmd_membership},
      {"numeval", cmd_numeval},
  };
  return table;
}

Outcome failure(const std::string& kind, const std::string& pointer, const std::string& message, int code) {
  json result{{"error", kind}, {"message", message}};
  if (!pointer.empty()) result["pointer"] = pointer;
  std::string diag = kind + " error" + (pointer.empty() ? "" : " at " + pointer) + ": " + message;
  return {{{"status", "error"}, {"result", result}, {"diagnostics", json::array({diag})}}, code};
}

}  // namespace

Outcome dispatch(const json& request, const Options& opts) {
  try {
    Node root{request, ""};
    allow(root, {"command", "payload"});
    Node cmd = root.at("command");
    auto it = handlers().find(cmd.string());
    if (it == handlers().end()) cmd.fail("unknown command \"" + cmd.string() + "\"");
    Node payload = root.at("payload");
    payload.object();
    Diagnostics diag;
    json result = it->second(payload, opts, diag);
    return {{{"status", "ok"}, {"result", result}, {"diagnostics", diag}}, 0};
  } catch (const SchemaError& e) {
    std::string what = e.what();
    return failure("schema", e.pointer(), what.substr(e.pointer().size() + 2), 2);
  } catch (const DomainError& e) {
    return failure("domain", "", e.what(), 1);
  } catch (const std::exception& e) {
    return failure("internal", "", e.what(), 1);
  }
}

Outcome run_text(const std::string& text, const Options& opts) {
  json request;
  try {
    request = json::parse(text);
  } catch (const json::parse_error& e) {
    return failure("schema", "/", std::string("invalid JSON: ") + e.what(), 2);
  }
  return dispatch(request, opts);
}

std::string render(const json& response) { return response.dump(2) + "\n"; }

}  // namespace elldiff::cli
