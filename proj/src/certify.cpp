#include "padicforge/certify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>

#include "json.hpp"

namespace pf {

using nlohmann::json;

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

u64 require_states(const Modulus& m, u64 cap, const char* what) {
  if (!m.fits_word() || m.word() > cap) {
    fail(ErrorCode::kCapExceeded,
         std::string(what) + " mod " + m.to_string() + " exceeds the state cap of " + std::to_string(cap));
  }
  return m.word();
}

// Largest k with p^k <= 2^16: the default depth of a refutation-only walk.
unsigned default_generic_k(u64 p) {
  unsigned k = 1;
  for (u64 v = p * p; v <= (u64{1} << 16); v *= p) ++k;
  return k;
}

}  // namespace

Limits Limits::from_env() {
  Limits l;
  if (const char* cap = std::getenv("PADIC_FORGE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) l.cap_states = v;
  }
  return l;
}

WordMap word_map(const FnExpr& f, const Modulus& m) {
  CompiledFn compiled(f, m);
  return [compiled](u64 x) { return compiled(x); };
}

FnExpr series_expr(const MahlerSeries& s) {
  // sum a_i C(x, i) = sum (a_i / i!) (x)_i
  std::vector<Rational> b;
  BigInt fact = 1;
  for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
    if (i > 0) fact *= i;
    b.push_back(s.coeffs()[i] / Rational(fact));
  }
  return FnExpr::poly(RationalPoly::falling(std::move(b)));
}

std::string_view orbit_status_name(OrbitStatus s) noexcept {
  switch (s) {
    case OrbitStatus::kTransitive: return "TRANSITIVE";
    case OrbitStatus::kShortCycle: return "SHORT_CYCLE";
    case OrbitStatus::kNotBijective: return "NOT_BIJECTIVE";
  }
  return "?";
}

// --- brute-force checkers ----------------------------------------------------

BijectiveResult bijective_mod(const WordMap& f, const Modulus& m, const Limits& limits) {
  const u64 n = require_states(m, limits.cap_states, "bijectivity check");
  std::vector<u64> preimage(n, n);  // n marks "not hit yet"
  for (u64 x = 0; x < n; ++x) {
    const u64 y = f(x);
    if (preimage[y] != n) return {false, std::make_pair(preimage[y], x)};
    preimage[y] = x;
  }
  return {true, std::nullopt};
}

BijectiveResult bijective_mod(const FnExpr& f, const Modulus& m, const Limits& limits) {
  return bijective_mod(word_map(f, m), m, limits);
}

BijectiveResult bijective_mod(const MahlerSeries& f, const Modulus& m, const Limits& limits) {
  return bijective_mod(series_expr(f), m, limits);
}

TransitiveResult transitive_mod(const WordMap& f, const Modulus& m, const Limits& limits) {
  const u64 n = require_states(m, limits.cap_states, "orbit walk");
  std::vector<bool> seen(n, false);
  seen[0] = true;
  u64 x = 0;
  for (u64 step = 1; step <= n; ++step) {
    x = f(x);
    if (x == 0) {
      return {step == n, step == n ? OrbitStatus::kTransitive : OrbitStatus::kShortCycle, step};
    }
    if (seen[x]) return {false, OrbitStatus::kNotBijective, step};
    seen[x] = true;
  }
  return {false, OrbitStatus::kNotBijective, n};  // unreachable: n + 1 distinct states
}

TransitiveResult transitive_mod(const FnExpr& f, const Modulus& m, const Limits& limits) {
  return transitive_mod(word_map(f, m), m, limits);
}

TransitiveResult transitive_mod(const MahlerSeries& f, const Modulus& m, const Limits& limits) {
  return transitive_mod(series_expr(f), m, limits);
}

CompatibleResult compatible_mod(const WordMap& f, const Modulus& m, const Limits& limits) {
  const u64 n = require_states(m, limits.cap_states, "compatibility check");
  std::vector<u64> values(n);
  for (u64 x = 0; x < n; ++x) values[x] = f(x);
  u64 pj = 1;
  for (unsigned j = 1; j < m.exponent(); ++j) {
    pj *= m.prime();
    for (u64 x = pj; x < n; ++x) {
      if (values[x] % pj != values[x % pj] % pj) return {false, std::make_pair(x, j)};
    }
  }
  return {true, std::nullopt};
}

CompatibleResult compatible_mod(const FnExpr& f, const Modulus& m, const Limits& limits) {
  return compatible_mod(word_map(f, m), m, limits);
}

// --- multivariate polynomials ------------------------------------------------

MultiPoly& MultiPoly::add_term(BigInt coeff, std::vector<unsigned> exponents) {
  if (exponents.size() != arity) fail(ErrorCode::kLengthMismatch, "term arity differs from polynomial arity");
  terms.push_back({std::move(coeff), std::move(exponents)});
  return *this;
}

std::uint64_t MultiPoly::eval_word(const std::vector<std::uint64_t>& x, std::uint64_t m) const {
  if (x.size() != arity) fail(ErrorCode::kLengthMismatch, "point arity differs from polynomial arity");
  u64 acc = 0;
  for (const auto& t : terms) {
    u64 v = static_cast<u64>(mod_floor(t.coeff, BigInt(m)));
    for (unsigned j = 0; j < arity; ++j) {
      for (unsigned e = 0; e < t.exponents[j]; ++e) v = static_cast<u64>(static_cast<u128>(v) * x[j] % m);
    }
    acc = static_cast<u64>((static_cast<u128>(acc) + v) % m);
  }
  return acc;
}

MultiPoly MultiPoly::partial(unsigned var) const {
  MultiPoly d;
  d.arity = arity;
  for (const auto& t : terms) {
    if (t.exponents[var] == 0) continue;
    auto e = t.exponents;
    --e[var];
    d.terms.push_back({t.coeff * t.exponents[var], std::move(e)});
  }
  return d;
}

std::string MultiPoly::to_string() const {
  std::string s;
  for (const auto& t : terms) {
    std::string term = t.coeff.str();
    for (unsigned j = 0; j < arity; ++j) {
      if (t.exponents[j] == 0) continue;
      term += "*x" + std::to_string(j);
      if (t.exponents[j] > 1) term += "^" + std::to_string(t.exponents[j]);
    }
    s += s.empty() ? term : " + " + term;
  }
  return s.empty() ? "0" : s;
}

EquiprobableResult equiprobable_mod(const std::vector<MultiPoly>& F, unsigned n_in, const Modulus& m,
                                    const Limits& limits) {
  if (F.empty()) fail(ErrorCode::kInvalidArgument, "empty polynomial map");
  for (const auto& f : F) {
    if (f.arity != n_in) fail(ErrorCode::kLengthMismatch, "component arity differs from the input arity");
  }
  const BigInt inputs = boost::multiprecision::pow(m.value(), n_in);
  const BigInt outputs = boost::multiprecision::pow(m.value(), static_cast<unsigned>(F.size()));
  if (inputs > limits.cap_inputs) {
    fail(ErrorCode::kCapExceeded, "fiber census over " + inputs.str() + " inputs exceeds the input cap");
  }
  if (outputs > limits.cap_states) {
    fail(ErrorCode::kCapExceeded, "fiber census over " + outputs.str() + " outputs exceeds the state cap");
  }
  const u64 q = m.word();
  const u64 n_inputs = static_cast<u64>(inputs);
  const u64 n_outputs = static_cast<u64>(outputs);
  std::vector<u64> counts(n_outputs, 0);
  std::vector<u64> x(n_in, 0);
  for (u64 i = 0; i < n_inputs; ++i) {
    u64 rest = i;
    for (unsigned j = 0; j < n_in; ++j) {
      x[j] = rest % q;
      rest /= q;
    }
    u64 index = 0;
    for (std::size_t c = F.size(); c-- > 0;) index = index * q + F[c].eval_word(x, q);
    ++counts[index];
  }
  EquiprobableResult r;
  r.expected_fiber = F.size() <= n_in ? n_inputs / n_outputs : 0;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  r.fiber_min = *lo;
  r.fiber_max = *hi;
  r.equiprobable = r.fiber_min == r.fiber_max && r.fiber_min == r.expected_fiber;
  if (!r.equiprobable) {
    u64 index = static_cast<u64>(lo - counts.begin());
    std::vector<u64> point;
    for (std::size_t c = 0; c < F.size(); ++c) {
      point.push_back(index % q);
      index /= q;
    }
    r.witness = std::move(point);
  }
  return r;
}

// --- certificate plumbing ----------------------------------------------------

std::string_view property_name(Property p) noexcept {
  switch (p) {
    case Property::kCompatible: return "COMPATIBLE";
    case Property::kMeasurePreserving: return "MEASURE_PRESERVING";
    case Property::kErgodic: return "ERGODIC";
    case Property::kEquiprobable: return "EQUIPROBABLE";
  }
  return "?";
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::kProven: return "PROVEN";
    case Verdict::kRefuted: return "REFUTED";
    case Verdict::kUnknown: return "UNKNOWN";
  }
  return "?";
}

std::string_view rule_name(Rule r) noexcept {
  switch (r) {
    case Rule::kMahlerCompatibility: return "MAHLER_COMPATIBILITY";
    case Rule::kMahlerMeasure2Adic: return "MAHLER_MEASURE_2ADIC";
    case Rule::kMahlerErgodic2Adic: return "MAHLER_ERGODIC_2ADIC";
    case Rule::kMahlerErgodicOddP: return "MAHLER_ERGODIC_ODD_P";
    case Rule::kLinearPlusPDifference: return "LINEAR_PLUS_P_DIFFERENCE";
    case Rule::kNegDifferenceForm: return "NEG_DIFFERENCE_FORM";
    case Rule::kJacobianModP: return "JACOBIAN_MOD_P";
    case Rule::kBijectiveModP2: return "BIJECTIVE_MOD_P2";
    case Rule::kTriangleOddWeight: return "TRIANGLE_ODD_WEIGHT";
    case Rule::kClassAThreshold: return "CLASS_A_THRESHOLD";
    case Rule::kPolyTransitiveThreshold: return "POLY_TRANSITIVE_THRESHOLD";
    case Rule::kPolyBijectiveThreshold: return "POLY_BIJECTIVE_THRESHOLD";
    case Rule::kClassBThreshold: return "CLASS_B_THRESHOLD";
    case Rule::kOnePlusXPlusP2B: return "ONE_PLUS_X_PLUS_P2_B";
    case Rule::kPrimitiveComposition: return "PRIMITIVE_COMPOSITION";
    case Rule::kBruteOnly: return "BRUTE_ONLY";
  }
  return "?";
}

std::string_view class_tag_name(ClassTag t) noexcept {
  switch (t) {
    case ClassTag::kZPoly: return "Z_POLY";
    case ClassTag::kQpPolyIntval: return "QP_POLY_INTVAL";
    case ClassTag::kClassA: return "CLASS_A";
    case ClassTag::kClassB: return "CLASS_B";
    case ClassTag::kGenericCompatible: return "GENERIC_COMPATIBLE";
  }
  return "?";
}

std::string Certificate::to_json() const {
  json j;
  j["property"] = property_name(property);
  j["verdict"] = verdict_name(verdict);
  j["theorem"] = rule_name(rule);
  j["modulus"] = {{"p", checked_modulus.prime()}, {"k", checked_modulus.exponent()}};
  if (!witness_json.empty()) j["witness"] = json::parse(witness_json);
  j["elapsed_ms"] = elapsed_ms;
  if (!note.empty()) j["note"] = note;
  return j.dump();
}

namespace {

Certificate make_cert(Property prop, Verdict v, Rule rule, Modulus m, const Stopwatch& sw, std::string note = {},
                      std::string witness = {}) {
  Certificate c;
  c.property = prop;
  c.verdict = v;
  c.rule = rule;
  c.checked_modulus = std::move(m);
  c.note = std::move(note);
  c.witness_json = std::move(witness);
  c.elapsed_ms = sw.ms();
  return c;
}

std::string orbit_witness(const TransitiveResult& r) {
  return json{{"orbit_length", r.orbit_length}, {"status", orbit_status_name(r.status)}}.dump();
}

std::string collision_witness(const BijectiveResult& r, const WordMap& f) {
  const auto [a, b] = *r.collision;
  return json{{"collision", {a, b}}, {"value", f(a)}}.dump();
}

bool p_integral(const Rational& q, u64 p) { return q == 0 || ord_p_rational(q, p) >= 0; }

bool all_coeffs_p_integral(const RationalPoly& poly, u64 p) {
  return std::all_of(poly.coeffs().begin(), poly.coeffs().end(), [&](const Rational& c) { return p_integral(c, p); });
}

std::optional<std::vector<u64>> residues_mod_p(const FnExpr& e, u64 p) {
  try {
    const CompiledFn f(e, Modulus(p, 1));
    std::vector<u64> v;
    for (u64 x = 0; x < p; ++x) v.push_back(f(x));
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

bool in_b(const FnExpr& e, u64 p);

// e = p w with w in B.
bool in_pb(const FnExpr& e, u64 p) {
  switch (e.kind()) {
    case NodeKind::kConst: return e.value() == 0 || ord_p_rational(e.value(), p) >= 1;
    case NodeKind::kPoly: {
      const RationalPoly mono = e.polynomial().to_monomial();
      return std::all_of(mono.coeffs().begin(), mono.coeffs().end(),
                         [&](const Rational& c) { return c == 0 || ord_p_rational(c, p) >= 1; });
    }
    case NodeKind::kAdd:
    case NodeKind::kSub: return in_pb(e.child(0), p) && in_pb(e.child(1), p);
    case NodeKind::kMul:
      return (in_pb(e.child(0), p) && in_b(e.child(1), p)) || (in_b(e.child(0), p) && in_pb(e.child(1), p));
    case NodeKind::kDelta: return in_pb(e.child(0), p);
    case NodeKind::kCompose: return in_pb(e.child(0), p) && in_b(e.child(1), p);
    default: return false;
  }
}

// e = 1 + p w with w in B.
bool in_one_plus_pb(const FnExpr& e, u64 p) {
  switch (e.kind()) {
    case NodeKind::kConst: return p_integral(e.value(), p) && in_pb(FnExpr::constant(e.value() - 1), p);
    case NodeKind::kPoly: {
      const RationalPoly shifted = e.polynomial().to_monomial() - RationalPoly::monomial({1});
      return in_pb(FnExpr::poly(shifted), p);
    }
    case NodeKind::kAdd:
      return (in_one_plus_pb(e.child(0), p) && in_pb(e.child(1), p)) ||
             (in_pb(e.child(0), p) && in_one_plus_pb(e.child(1), p));
    case NodeKind::kSub: return in_one_plus_pb(e.child(0), p) && in_pb(e.child(1), p);
    case NodeKind::kMul: return in_one_plus_pb(e.child(0), p) && in_one_plus_pb(e.child(1), p);
    case NodeKind::kPow: return in_one_plus_pb(e.child(0), p) && in_b(e.child(1), p);
    case NodeKind::kInv: return in_one_plus_pb(e.child(0), p);
    case NodeKind::kCompose: return in_one_plus_pb(e.child(0), p) && in_b(e.child(1), p);
    default: return false;
  }
}

bool in_b(const FnExpr& e, u64 p) {
  switch (e.kind()) {
    case NodeKind::kVar: return true;
    case NodeKind::kConst: return p_integral(e.value(), p);
    case NodeKind::kPoly: return all_coeffs_p_integral(e.polynomial().to_monomial(), p);
    case NodeKind::kAdd:
    case NodeKind::kSub:
    case NodeKind::kMul:
    case NodeKind::kCompose: return in_b(e.child(0), p) && in_b(e.child(1), p);
    case NodeKind::kDelta: return in_b(e.child(0), p);
    case NodeKind::kInv: {
      if (!in_b(e.child(0), p)) return false;
      const auto vals = residues_mod_p(e.child(0), p);
      return vals && std::none_of(vals->begin(), vals->end(), [](u64 v) { return v == 0; });
    }
    case NodeKind::kPow: return in_one_plus_pb(e.child(0), p) && in_b(e.child(1), p);
    default: return false;  // bitwise nodes
  }
}

bool is_shift(const FnExpr& e, u64 p, bool require_one) {
  if (e.kind() != NodeKind::kPoly) return false;
  const RationalPoly m = e.polynomial().to_monomial();
  if (m.coeffs().size() != 2 || m.coeffs()[1] != 1) return false;
  const Rational& c = m.coeffs()[0];
  if (require_one) return c == 1;
  return c != 0 && ord_p_rational(c, p) == 0;
}

std::optional<Rational> const_with_ord_at_least(const FnExpr& e, u64 p, long need) {
  if (e.kind() != NodeKind::kConst || e.value() == 0) return std::nullopt;
  if (ord_p_rational(e.value(), p) < need) return std::nullopt;
  return e.value();
}

// ADD(shift, MUL(CONST, rest)) in either operand order; returns rest.
std::optional<FnExpr> split_shift_plus_multiple(const FnExpr& e, u64 p, bool require_one, long need) {
  if (e.kind() != NodeKind::kAdd) return std::nullopt;
  for (int s = 0; s < 2; ++s) {
    const FnExpr& a = e.child(s);
    const FnExpr& b = e.child(1 - s);
    if (!is_shift(a, p, require_one) || b.kind() != NodeKind::kMul) continue;
    for (int t = 0; t < 2; ++t) {
      if (const_with_ord_at_least(b.child(t), p, need)) return b.child(1 - t);
    }
  }
  return std::nullopt;
}

// c + x + p^j delta(v), j >= 1, v compatible.
bool matches_linear_difference(const FnExpr& e, u64 p) {
  const auto rest = split_shift_plus_multiple(e, p, false, 1);
  return rest && rest->kind() == NodeKind::kDelta && syntactically_compatible(rest->child(0), p);
}

// 1 + x + 2 (v(x+1) + NEG v(x)).
bool matches_neg_difference(const FnExpr& e, u64 p) {
  if (p != 2) return false;
  const auto rest = split_shift_plus_multiple(e, p, true, 1);
  if (!rest || rest->kind() != NodeKind::kAdd) return false;
  for (int s = 0; s < 2; ++s) {
    const FnExpr& shifted = rest->child(s);
    const FnExpr& negated = rest->child(1 - s);
    if (shifted.kind() != NodeKind::kCompose || negated.kind() != NodeKind::kNeg) continue;
    if (!is_shift(shifted.child(1), p, true)) continue;
    if (structurally_equal(shifted.child(0), negated.child(0)) && syntactically_compatible(negated.child(0), p)) {
      return true;
    }
  }
  return false;
}

// 1 + x + p^2 g, g in B.
bool matches_one_plus_x_plus_p2b(const FnExpr& e, u64 p) {
  const auto rest = split_shift_plus_multiple(e, p, true, 2);
  return rest && in_b(*rest, p);
}

// d + c x + p v, c a unit, v compatible.
bool matches_linear_plus_p(const FnExpr& e, u64 p) {
  if (e.kind() != NodeKind::kAdd) return false;
  for (int s = 0; s < 2; ++s) {
    const FnExpr& a = e.child(s);
    const FnExpr& b = e.child(1 - s);
    if (a.kind() != NodeKind::kPoly || b.kind() != NodeKind::kMul) continue;
    const RationalPoly m = a.polynomial().to_monomial();
    if (m.coeffs().size() != 2 || !p_integral(m.coeffs()[0], p) || ord_p_rational(m.coeffs()[1], p) != 0) continue;
    for (int t = 0; t < 2; ++t) {
      if (const_with_ord_at_least(b.child(t), p, 1) && syntactically_compatible(b.child(1 - t), p)) return true;
    }
  }
  return false;
}

Certificate generic_check(const FnExpr& f, Property prop, u64 p, unsigned generic_k, const Limits& limits,
                          const Stopwatch& sw) {
  const Modulus m(p, generic_k ? generic_k : default_generic_k(p));
  const std::string unknown_note =
      "no finite threshold is known for this function class; only a refutation is possible by brute force";
  if (prop == Property::kErgodic) {
    const auto r = transitive_mod(f, m, limits);
    if (!r.transitive) return make_cert(prop, Verdict::kRefuted, Rule::kBruteOnly, m, sw, {}, orbit_witness(r));
  } else if (prop == Property::kCompatible) {
    const auto r = compatible_mod(f, m, limits);
    if (!r.compatible) {
      return make_cert(prop, Verdict::kRefuted, Rule::kBruteOnly, m, sw, {},
                       json{{"x", r.witness->first}, {"level", r.witness->second}}.dump());
    }
  } else {
    const WordMap fm = word_map(f, m);
    const auto r = bijective_mod(fm, m, limits);
    if (!r.bijective) return make_cert(prop, Verdict::kRefuted, Rule::kBruteOnly, m, sw, {}, collision_witness(r, fm));
  }
  return make_cert(prop, Verdict::kUnknown, Rule::kBruteOnly, m, sw, unknown_note);
}

Rule threshold_rule(ClassTag tag, Property prop) {
  const bool ergodic = prop == Property::kErgodic;
  switch (tag) {
    case ClassTag::kZPoly: return ergodic ? Rule::kClassBThreshold : Rule::kBijectiveModP2;
    case ClassTag::kQpPolyIntval: return ergodic ? Rule::kPolyTransitiveThreshold : Rule::kPolyBijectiveThreshold;
    case ClassTag::kClassA: return Rule::kClassAThreshold;
    case ClassTag::kClassB: return Rule::kClassBThreshold;
    case ClassTag::kGenericCompatible: break;
  }
  return Rule::kBruteOnly;
}

Certificate threshold_certificate(const FnExpr& f, const FunctionClass& cls, Property prop, u64 p,
                                  unsigned generic_k, const Limits& limits, const Stopwatch& sw) {
  const auto k0 = threshold_exponent(cls, prop, p);
  if (!k0) {
    if (cls.tag == ClassTag::kClassA && p == 2 && f.is_polynomial_leaf()) {
      const MahlerSeries s = MahlerSeries::from_poly(f.as_polynomial(), 2);
      const bool ok = prop == Property::kErgodic ? is_ergodic_2adic(s) : is_measure_preserving_2adic(s);
      return make_cert(prop, ok ? Verdict::kProven : Verdict::kRefuted,
                       prop == Property::kErgodic ? Rule::kMahlerErgodic2Adic : Rule::kMahlerMeasure2Adic,
                       Modulus(2, 1), sw);
    }
    return generic_check(f, prop, p, generic_k, limits, sw);
  }
  const Modulus m(p, *k0);
  const Rule rule = threshold_rule(cls.tag, prop);
  if (prop == Property::kErgodic) {
    const auto r = transitive_mod(f, m, limits);
    return make_cert(prop, r.transitive ? Verdict::kProven : Verdict::kRefuted, rule, m, sw, {},
                     r.transitive ? std::string{} : orbit_witness(r));
  }
  const WordMap fm = word_map(f, m);
  const auto r = bijective_mod(fm, m, limits);
  return make_cert(prop, r.bijective ? Verdict::kProven : Verdict::kRefuted, rule, m, sw, {},
                   r.bijective ? std::string{} : collision_witness(r, fm));
}

}  // namespace

bool class_b_membership(const FnExpr& e, std::uint64_t p) { return in_b(e, p); }

FunctionClass infer_class(const FnExpr& e, std::uint64_t p) {
  FunctionClass cls;
  if (e.is_polynomial_leaf()) {
    const RationalPoly poly = e.as_polynomial();
    cls.degree = poly.degree();
    if (cls.degree > kDefaultDegreeCap) return cls;
    if (all_coeffs_p_integral(poly.to_monomial(), p)) {
      cls.tag = ClassTag::kZPoly;
      return cls;
    }
    const MahlerSeries s = MahlerSeries::from_poly(poly, p);
    if (s.is_integer_valued() && is_compatible(s)) {
      const RhoLambda rl = rho_lambda(poly, p);
      cls.tag = ClassTag::kQpPolyIntval;
      cls.rho = rl.rho;
      cls.lambda = rl.lambda;
    }
    return cls;
  }
  if (class_b_membership(e, p)) cls.tag = ClassTag::kClassB;
  return cls;
}

std::optional<unsigned> threshold_exponent(const FunctionClass& cls, Property property, std::uint64_t p) {
  const bool ergodic = property == Property::kErgodic;
  switch (cls.tag) {
    case ClassTag::kZPoly:
    case ClassTag::kClassB:
      if (!ergodic) return 2u;
      return (p == 2 || p == 3) ? 3u : 2u;
    case ClassTag::kClassA:
      if (p == 2) return std::nullopt;
      if (!ergodic) return cls.lambda + 2;
      return p == 3 ? cls.lambda + 2 : cls.lambda + 1;
    case ClassTag::kQpPolyIntval:
      return floor_log(std::max<std::size_t>(cls.degree, 1), p) + 3;
    case ClassTag::kGenericCompatible: break;
  }
  return std::nullopt;
}

Certificate ergodicity_certificate(const FnExpr& f, const FunctionClass& cls, std::uint64_t p, unsigned generic_k,
                                   const Limits& limits) {
  const Stopwatch sw;
  return threshold_certificate(f, cls, Property::kErgodic, p, generic_k, limits, sw);
}

Certificate measure_preservation_certificate(const FnExpr& f, const FunctionClass& cls, std::uint64_t p,
                                             unsigned generic_k, const Limits& limits) {
  const Stopwatch sw;
  return threshold_certificate(f, cls, Property::kMeasurePreserving, p, generic_k, limits, sw);
}

Certificate certify(const FnExpr& f, Property property, std::uint64_t p, unsigned generic_k, const Limits& limits) {
  const Stopwatch sw;
  if (!is_prime(p)) fail(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
  const Modulus unit_check(p, 1);

  if (property == Property::kCompatible) {
    if (f.is_polynomial_leaf()) {
      const MahlerSeries s = MahlerSeries::from_poly(f.as_polynomial(), p);
      if (s.degree() <= kDefaultDegreeCap) {
        if (!s.is_integer_valued()) {
          return make_cert(property, Verdict::kRefuted, Rule::kMahlerCompatibility, unit_check, sw,
                           "not integer-valued over Z_p");
        }
        return make_cert(property, is_compatible(s) ? Verdict::kProven : Verdict::kRefuted,
                         Rule::kMahlerCompatibility, unit_check, sw);
      }
    }
    if (syntactically_compatible(f, p)) {
      return make_cert(property, Verdict::kProven, Rule::kPrimitiveComposition, unit_check, sw);
    }
    return generic_check(f, property, p, generic_k, limits, sw);
  }

  const Property prop = property == Property::kEquiprobable ? Property::kMeasurePreserving : property;
  const auto relabel = [&](Certificate c) {
    c.property = property;
    return c;
  };

  const FunctionClass cls = infer_class(f, p);
  if (f.is_polynomial_leaf()) {
    if (cls.tag == ClassTag::kGenericCompatible) {
      return relabel(make_cert(prop, Verdict::kRefuted, Rule::kMahlerCompatibility, unit_check, sw,
                               "polynomial is not a compatible integer-valued function over Z_p"));
    }
    return relabel(threshold_certificate(f, cls, prop, p, generic_k, limits, sw));
  }

  if (prop == Property::kErgodic) {
    if (matches_linear_difference(f, p)) {
      return make_cert(prop, Verdict::kProven, Rule::kLinearPlusPDifference, unit_check, sw);
    }
    if (matches_neg_difference(f, p)) {
      return make_cert(prop, Verdict::kProven, Rule::kNegDifferenceForm, unit_check, sw);
    }
    if (matches_one_plus_x_plus_p2b(f, p)) {
      return make_cert(prop, Verdict::kProven, Rule::kOnePlusXPlusP2B, unit_check, sw);
    }
  } else if (matches_linear_plus_p(f, p)) {
    return relabel(make_cert(prop, Verdict::kProven, Rule::kLinearPlusPDifference, unit_check, sw));
  }
  return relabel(threshold_certificate(f, cls, prop, p, generic_k, limits, sw));
}

Certificate jacobian_equiprobable_certificate(const std::vector<MultiPoly>& F, unsigned n_in, std::uint64_t p,
                                              const Limits& limits) {
  const Stopwatch sw;
  const Modulus mp(p, 1);
  const auto census = equiprobable_mod(F, n_in, mp, limits);
  if (!census.equiprobable) {
    return make_cert(Property::kEquiprobable, Verdict::kUnknown, Rule::kJacobianModP, mp, sw,
                     "not equiprobable modulo p; the criterion does not apply");
  }
  const std::size_t rows = F.size();
  std::vector<std::vector<MultiPoly>> jac(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (unsigned j = 0; j < n_in; ++j) jac[i].push_back(F[i].partial(j));
  }
  const u64 points = static_cast<u64>(boost::multiprecision::pow(BigInt(p), n_in));
  std::vector<u64> x(n_in);
  for (u64 idx = 0; idx < points; ++idx) {
    u64 rest = idx;
    for (unsigned j = 0; j < n_in; ++j) {
      x[j] = rest % p;
      rest /= p;
    }
    // Rank of the Jacobian over GF(p) by elimination.
    std::vector<std::vector<u64>> a(rows, std::vector<u64>(n_in));
    for (std::size_t i = 0; i < rows; ++i) {
      for (unsigned j = 0; j < n_in; ++j) a[i][j] = jac[i][j].eval_word(x, p);
    }
    std::size_t rank = 0;
    for (unsigned col = 0; col < n_in && rank < rows; ++col) {
      std::size_t piv = rank;
      while (piv < rows && a[piv][col] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(a[piv], a[rank]);
      const u64 inv = static_cast<u64>(inverse_mod(BigInt(a[rank][col]), BigInt(p)));
      for (std::size_t r = 0; r < rows; ++r) {
        if (r == rank || a[r][col] == 0) continue;
        const u64 factor = static_cast<u64>(static_cast<u128>(a[r][col]) * inv % p);
        for (unsigned c = col; c < n_in; ++c) {
          a[r][c] = static_cast<u64>((a[r][c] + p * p - static_cast<u128>(factor) * a[rank][c] % p) % p);
        }
      }
      ++rank;
    }
    if (rank < rows) {
      return make_cert(Property::kEquiprobable, Verdict::kUnknown, Rule::kJacobianModP, mp, sw,
                       "Jacobian is degenerate modulo p; the criterion is only sufficient", json{{"point", x}}.dump());
    }
  }
  return make_cert(Property::kEquiprobable, Verdict::kProven, Rule::kJacobianModP, mp, sw);
}

Certificate polynomial_bijectivity_certificate(const std::vector<MultiPoly>& F, std::uint64_t p,
                                               const Limits& limits) {
  const Stopwatch sw;
  const Modulus m2(p, 2);
  const unsigned n = static_cast<unsigned>(F.size());
  const auto census = equiprobable_mod(F, n, m2, limits);
  if (census.equiprobable) return make_cert(Property::kMeasurePreserving, Verdict::kProven, Rule::kBijectiveModP2, m2, sw);
  return make_cert(Property::kMeasurePreserving, Verdict::kRefuted, Rule::kBijectiveModP2, m2, sw, {},
                   json{{"missed_point", *census.witness}}.dump());
}

Certificate triangle_certificate(const BoolTriangle& t) {
  const Stopwatch sw;
  if (t.length() == 0) fail(ErrorCode::kLengthMismatch, "empty triangle");
  bool ok = t.psi[0].anf == 1;
  std::size_t bad = 0;
  for (std::size_t i = 1; i < t.length() && ok; ++i) {
    if (t.psi[i].weight() % 2 == 0) {
      ok = false;
      bad = i;
    }
  }
  const Modulus m(2, static_cast<unsigned>(t.length()));
  if (ok) return make_cert(Property::kErgodic, Verdict::kProven, Rule::kTriangleOddWeight, m, sw);
  return make_cert(Property::kErgodic, Verdict::kRefuted, Rule::kTriangleOddWeight, m, sw, {},
                   json{{"digit", bad}}.dump());
}

ResidueInt derivative_mod_p(const MahlerSeries& f, const ResidueInt& x, unsigned lambda) {
  const u64 p = f.prime();
  if (p == 2) fail(ErrorCode::kNotClassA, "the derivative formula needs an odd prime");
  if (x.modulus().prime() != p) fail(ErrorCode::kMixedModuli, "point and series use different primes");
  if (!f.is_integer_valued() || !is_compatible(f)) {
    fail(ErrorCode::kNotClassA, "series is not a compatible integer-valued function");
  }
  const u64 n = 2 * static_cast<u64>(pow_big(p, lambda));
  std::vector<Rational> row;
  row.reserve(n + 1);
  for (u64 j = 0; j <= n; ++j) row.push_back(f.value_at(x.residue() + j));
  Rational sum = 0;
  for (u64 i = 1; i <= n; ++i) {
    for (u64 j = 0; j + i <= n; ++j) row[j] = row[j + 1] - row[j];
    const Rational term = row[0] / Rational(i);
    sum += (i % 2 == 1) ? term : Rational(-term);
  }
  return rational_to_residue(sum, Modulus(p, 2));
}

}  // namespace pf
