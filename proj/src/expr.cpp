#include "padicforge/expr.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>

#include "padicforge/certify.hpp"

namespace pf {

struct FnExpr::Node {
  NodeKind kind;
  std::vector<FnExpr> children;
  Rational value;
  RationalPoly poly;
  SourceSpan span;
};

std::string_view node_kind_name(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::kVar: return "VAR";
    case NodeKind::kConst: return "CONST";
    case NodeKind::kAdd: return "ADD";
    case NodeKind::kSub: return "SUB";
    case NodeKind::kMul: return "MUL";
    case NodeKind::kXor: return "XOR";
    case NodeKind::kAnd: return "AND";
    case NodeKind::kOr: return "OR";
    case NodeKind::kNeg: return "NEG";
    case NodeKind::kPow: return "POW";
    case NodeKind::kInv: return "INV";
    case NodeKind::kPoly: return "POLY";
    case NodeKind::kDelta: return "DELTA";
    case NodeKind::kCompose: return "COMPOSE";
  }
  return "?";
}

FnExpr FnExpr::make(NodeKind kind, std::vector<FnExpr> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::var() { return make(NodeKind::kVar, {}); }

FnExpr FnExpr::constant(Rational value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kConst;
  n->value = std::move(value);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::poly(RationalPoly poly) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kPoly;
  n->poly = std::move(poly);
  return FnExpr(std::move(n));
}

FnExpr FnExpr::add(FnExpr a, FnExpr b) { return make(NodeKind::kAdd, {std::move(a), std::move(b)}); }
FnExpr FnExpr::sub(FnExpr a, FnExpr b) { return make(NodeKind::kSub, {std::move(a), std::move(b)}); }
FnExpr FnExpr::mul(FnExpr a, FnExpr b) { return make(NodeKind::kMul, {std::move(a), std::move(b)}); }
FnExpr FnExpr::bit_xor(FnExpr a, FnExpr b) { return make(NodeKind::kXor, {std::move(a), std::move(b)}); }
FnExpr FnExpr::bit_and(FnExpr a, FnExpr b) { return make(NodeKind::kAnd, {std::move(a), std::move(b)}); }
FnExpr FnExpr::bit_or(FnExpr a, FnExpr b) { return make(NodeKind::kOr, {std::move(a), std::move(b)}); }
FnExpr FnExpr::neg(FnExpr a) { return make(NodeKind::kNeg, {std::move(a)}); }
FnExpr FnExpr::pow(FnExpr base, FnExpr exponent) {
  return make(NodeKind::kPow, {std::move(base), std::move(exponent)});
}
FnExpr FnExpr::inv(FnExpr a) { return make(NodeKind::kInv, {std::move(a)}); }
FnExpr FnExpr::delta(FnExpr a) { return make(NodeKind::kDelta, {std::move(a)}); }
FnExpr FnExpr::compose(FnExpr outer, FnExpr inner) {
  return make(NodeKind::kCompose, {std::move(outer), std::move(inner)});
}

NodeKind FnExpr::kind() const noexcept { return node_->kind; }
std::span<const FnExpr> FnExpr::children() const noexcept { return node_->children; }
const SourceSpan& FnExpr::span() const noexcept { return node_->span; }

const Rational& FnExpr::value() const {
  if (node_->kind != NodeKind::kConst) fail(ErrorCode::kInvalidArgument, "value() on a non-constant node");
  return node_->value;
}

const RationalPoly& FnExpr::polynomial() const {
  if (node_->kind != NodeKind::kPoly) fail(ErrorCode::kInvalidArgument, "polynomial() on a non-POLY node");
  return node_->poly;
}

FnExpr FnExpr::with_span(SourceSpan span) const {
  auto n = std::make_shared<Node>(*node_);
  n->span = span;
  return FnExpr(std::move(n));
}

bool FnExpr::is_polynomial_leaf() const noexcept {
  return kind() == NodeKind::kVar || kind() == NodeKind::kConst || kind() == NodeKind::kPoly;
}

RationalPoly FnExpr::as_polynomial() const {
  switch (kind()) {
    case NodeKind::kVar: return RationalPoly::monomial({0, 1});
    case NodeKind::kConst: return RationalPoly::monomial({node_->value});
    case NodeKind::kPoly: return node_->poly;
    default: fail(ErrorCode::kInvalidArgument, std::string(node_kind_name(kind())) + " node is not a polynomial");
  }
}

bool FnExpr::uses_bitwise() const {
  switch (kind()) {
    case NodeKind::kXor:
    case NodeKind::kAnd:
    case NodeKind::kOr:
    case NodeKind::kNeg: return true;
    default: break;
  }
  return std::any_of(children().begin(), children().end(), [](const FnExpr& c) { return c.uses_bitwise(); });
}

std::size_t FnExpr::depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t FnExpr::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

namespace {

std::string rational_text(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  std::string s = num < 0 ? BigInt(-num).str() : num.str();
  if (den != 1) s += "/" + den.str();
  return num < 0 ? "(-" + s + ")" : s;
}

std::string poly_text(const RationalPoly& poly, const std::string& x) {
  if (poly.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < poly.coeffs().size(); ++i) {
    const Rational& c = poly.coeffs()[i];
    if (c == 0) continue;
    std::string term = rational_text(c);
    if (i > 0) {
      const std::string base = poly.basis() == Basis::kMonomial
                                   ? (i == 1 ? x : x + "^" + std::to_string(i))
                                   : "ff(" + x + "," + std::to_string(i) + ")";
      term = c == 1 ? base : term + "*" + base;
    }
    s += s.empty() ? term : " + " + term;
  }
  return "(" + s + ")";
}

// Prints e with every occurrence of x replaced by `x` (compositions inline the inner text).
std::string render(const FnExpr& e, const std::string& x) {
  const auto c = [&](std::size_t i) { return render(e.child(i), x); };
  switch (e.kind()) {
    case NodeKind::kVar: return x;
    case NodeKind::kConst: return rational_text(e.value());
    case NodeKind::kPoly: return poly_text(e.polynomial(), x);
    case NodeKind::kAdd: return "(" + c(0) + " + " + c(1) + ")";
    case NodeKind::kSub: return "(" + c(0) + " - " + c(1) + ")";
    case NodeKind::kMul: return "(" + c(0) + " * " + c(1) + ")";
    case NodeKind::kXor: return "xor(" + c(0) + ", " + c(1) + ")";
    case NodeKind::kAnd: return "and(" + c(0) + ", " + c(1) + ")";
    case NodeKind::kOr: return "or(" + c(0) + ", " + c(1) + ")";
    case NodeKind::kNeg: return "neg(" + c(0) + ")";
    case NodeKind::kInv: return "inv(" + c(0) + ")";
    case NodeKind::kPow: return "(" + c(0) + ")^(" + c(1) + ")";
    case NodeKind::kDelta:
      // delta is taken in the variable, so under substitution it expands.
      if (x == "x") return "delta(" + c(0) + ")";
      return "(" + render(e.child(0), "(" + x + " + 1)") + " - " + c(0) + ")";
    case NodeKind::kCompose: return render(e.child(0), "(" + c(1) + ")");
  }
  return "?";
}

}  // namespace

std::string FnExpr::to_string() const { return render(*this, "x"); }

bool structurally_equal(const FnExpr& a, const FnExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.children().size() != b.children().size()) return false;
  if (a.kind() == NodeKind::kConst && a.value() != b.value()) return false;
  if (a.kind() == NodeKind::kPoly) {
    const auto& pa = a.polynomial();
    const auto& pb = b.polynomial();
    if (pa.basis() != pb.basis() || pa.coeffs() != pb.coeffs()) return false;
  }
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!structurally_equal(a.child(i), b.child(i))) return false;
  }
  return true;
}

// --- compiled evaluation -----------------------------------------------------

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct WordOps {
  using T = u64;
  static T from_big(const BigInt& v) { return static_cast<u64>(v); }
  static BigInt to_big(T v) { return BigInt(v); }
  static T add(T a, T b, T m) {
    const T s = a + b;  // m < 2^63, no overflow
    return s >= m ? s - m : s;
  }
  static T sub(T a, T b, T m) { return a >= b ? a - b : a + (m - b); }
  static T mul(T a, T b, T m) { return static_cast<T>(static_cast<u128>(a) * b % m); }
  static T rem(T a, T m) { return a % m; }
  static u64 mod_small(T a, u64 p) { return a % p; }
  static T powm(T b, T e, T m) {
    T r = 1 % m;
    b %= m;
    while (e > 0) {
      if (e & 1) r = mul(r, b, m);
      b = mul(b, b, m);
      e >>= 1;
    }
    return r;
  }
  static T inverse(T a, T m) {
    __int128 r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      const __int128 q = r0 / r1;
      __int128 t = r0 - q * r1;
      r0 = r1;
      r1 = t;
      t = s0 - q * s1;
      s0 = s1;
      s1 = t;
    }
    if (s0 < 0) s0 += m;
    return static_cast<T>(s0);
  }
  static T divide_exact(T a, T d) { return a / d; }
};

struct BigOps {
  using T = BigInt;
  static T from_big(const BigInt& v) { return v; }
  static BigInt to_big(const T& v) { return v; }
  static T add(const T& a, const T& b, const T& m) {
    T s = a + b;
    if (s >= m) s -= m;
    return s;
  }
  static T sub(const T& a, const T& b, const T& m) { return a >= b ? T(a - b) : T(a + m - b); }
  static T mul(const T& a, const T& b, const T& m) { return (a * b) % m; }
  static T rem(const T& a, const T& m) { return a % m; }
  static u64 mod_small(const T& a, u64 p) { return static_cast<u64>(a % p); }
  static T powm(const T& b, const T& e, const T& m) { return boost::multiprecision::powm(b, e, m); }
  static T inverse(const T& a, const T& m) { return inverse_mod(a, m); }
  static T divide_exact(const T& a, const T& d) { return a / d; }
};

template <class T>
struct CNode {
  NodeKind kind;
  int a = -1, b = -1;
  T value{};                 // kConst
  std::vector<T> coeffs;     // kPoly: L * c_i mod lift (monomial basis)
  T lift{};                  // kPoly: p^(k+v)
  T pv{};                    // kPoly: p^v
  T unit_inv{};              // kPoly: inverse of the unit part of L mod p^k
};

template <class Ops>
struct Program {
  using T = typename Ops::T;
  std::vector<CNode<T>> nodes;
  int root = -1;
  T m{};
  u64 p = 0;
  unsigned k = 0;
  u64 mask = 0;  // 2^k - 1 for bitwise nodes (word path only)

  T eval(int idx, const T& x) const {
    const CNode<T>& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
      case NodeKind::kVar: return x;
      case NodeKind::kConst: return n.value;
      case NodeKind::kAdd: return Ops::add(eval(n.a, x), eval(n.b, x), m);
      case NodeKind::kSub: return Ops::sub(eval(n.a, x), eval(n.b, x), m);
      case NodeKind::kMul: return Ops::mul(eval(n.a, x), eval(n.b, x), m);
      case NodeKind::kXor: return eval(n.a, x) ^ eval(n.b, x);
      case NodeKind::kAnd: return eval(n.a, x) & eval(n.b, x);
      case NodeKind::kOr: return eval(n.a, x) | eval(n.b, x);
      case NodeKind::kNeg: return T(m - T(1)) - eval(n.a, x);
      case NodeKind::kPow: {
        const T base = eval(n.a, x);
        if (Ops::mod_small(base, p) != 1 % p) {
          fail(ErrorCode::kBaseNotOneUnit,
               "exponent base " + Ops::to_big(base).str() + " is not 1 mod " + std::to_string(p));
        }
        return Ops::powm(base, eval(n.b, x), m);
      }
      case NodeKind::kInv: {
        const T u = eval(n.a, x);
        if (Ops::mod_small(u, p) == 0) {
          fail(ErrorCode::kNotAUnit, Ops::to_big(u).str() + " is not a unit mod " + std::to_string(p));
        }
        return Ops::inverse(u, m);
      }
      case NodeKind::kPoly: {
        T acc{0};
        for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) {
          acc = Ops::add(Ops::mul(acc, x, n.lift), *it, n.lift);
        }
        if (Ops::rem(acc, n.pv) != T(0)) {
          fail(ErrorCode::kNotIntegerValued,
               "polynomial is not " + std::to_string(p) + "-integral at x=" + Ops::to_big(x).str());
        }
        return Ops::mul(Ops::divide_exact(acc, n.pv), n.unit_inv, m);
      }
      case NodeKind::kDelta: {
        const T x1 = Ops::add(x, T(1), m);
        return Ops::sub(eval(n.a, x1), eval(n.a, x), m);
      }
      case NodeKind::kCompose: return eval(n.a, eval(n.b, x));
    }
    return x;
  }
};

// Lifted modulus p^(k+v) needed by each POLY node, as exponents.
void collect_lifts(const FnExpr& e, std::uint64_t p, unsigned k, unsigned& max_exp) {
  if (e.kind() == NodeKind::kPoly) {
    const RationalPoly mono = e.polynomial().to_monomial();
    const unsigned v = ord_p(mono.common_denominator(), p).value_or(0);
    max_exp = std::max(max_exp, k + v);
  }
  for (const auto& c : e.children()) collect_lifts(c, p, k, max_exp);
}

template <class Ops>
int compile_node(const FnExpr& e, Program<Ops>& prog) {
  using T = typename Ops::T;
  CNode<T> n;
  n.kind = e.kind();
  const u64 p = prog.p;
  switch (e.kind()) {
    case NodeKind::kXor:
    case NodeKind::kAnd:
    case NodeKind::kOr:
    case NodeKind::kNeg:
      if (p != 2) {
        fail(ErrorCode::kBitwiseOddPrime,
             std::string(node_kind_name(e.kind())) + " is only defined for p = 2, got p = " + std::to_string(p));
      }
      break;
    case NodeKind::kConst: {
      const Modulus mod(p, prog.k);
      n.value = Ops::from_big(rational_to_residue(e.value(), mod).residue());
      break;
    }
    case NodeKind::kPoly: {
      const RationalPoly mono = e.polynomial().to_monomial();
      const BigInt lcd = mono.common_denominator();
      const unsigned v = ord_p(lcd, p).value_or(0);
      const BigInt pv = pow_big(p, v);
      const BigInt lift = pow_big(p, prog.k + v);
      const BigInt unit = lcd / pv;
      const BigInt m = pow_big(p, prog.k);
      for (const auto& c : mono.coeffs()) {
        const BigInt scaled = boost::multiprecision::numerator(c) * (lcd / boost::multiprecision::denominator(c));
        n.coeffs.push_back(Ops::from_big(mod_floor(scaled, lift)));
      }
      n.lift = Ops::from_big(lift);
      n.pv = Ops::from_big(pv);
      n.unit_inv = Ops::from_big(inverse_mod(unit, m));
      break;
    }
    default: break;
  }
  const auto ch = e.children();
  if (!ch.empty()) n.a = compile_node(ch[0], prog);
  if (ch.size() > 1) n.b = compile_node(ch[1], prog);
  prog.nodes.push_back(std::move(n));
  return static_cast<int>(prog.nodes.size()) - 1;
}

template <class Ops>
Program<Ops> compile(const FnExpr& e, const Modulus& modulus) {
  Program<Ops> prog;
  prog.p = modulus.prime();
  prog.k = modulus.exponent();
  prog.m = Ops::from_big(modulus.value());
  prog.root = compile_node(e, prog);
  return prog;
}

}  // namespace

struct CompiledFn::Impl {
  std::optional<Program<WordOps>> word;
  std::optional<Program<BigOps>> big;
};

CompiledFn::CompiledFn(const FnExpr& expr, const Modulus& modulus) : modulus_(modulus), word_path_(false) {
  unsigned max_exp = modulus.exponent();
  collect_lifts(expr, modulus.prime(), modulus.exponent(), max_exp);
  word_path_ = modulus.with_exponent(max_exp).fits_word();
  auto impl = std::make_shared<Impl>();
  if (word_path_) {
    impl->word = compile<WordOps>(expr, modulus);
  } else {
    impl->big = compile<BigOps>(expr, modulus);
  }
  impl_ = std::move(impl);
}

std::uint64_t CompiledFn::operator()(std::uint64_t x) const {
  if (word_path_) {
    const auto& prog = *impl_->word;
    return prog.eval(prog.root, x % prog.m);
  }
  return static_cast<std::uint64_t>(eval_big(BigInt(x)));
}

BigInt CompiledFn::eval_big(const BigInt& x) const {
  if (word_path_) {
    const auto& prog = *impl_->word;
    return BigInt(prog.eval(prog.root, static_cast<u64>(mod_floor(x, modulus_.value()))));
  }
  const auto& prog = *impl_->big;
  return prog.eval(prog.root, mod_floor(x, prog.m));
}

ResidueInt eval_expr(const FnExpr& e, const ResidueInt& x) {
  return ResidueInt(CompiledFn(e, x.modulus()).eval_big(x.residue()), x.modulus());
}

BigInt eval_expr(const FnExpr& e, const BigInt& x, const CompositeModulus& m) {
  std::vector<BigInt> parts;
  for (const auto& f : m.factors()) parts.push_back(CompiledFn(e, f).eval_big(x));
  return m.combine(parts);
}

// --- constructors ------------------------------------------------------------

FnExpr delta(const FnExpr& e) {
  // Polynomial leaves are differenced exactly, so the result does not depend
  // on which representative of x + 1 is used.
  if (e.is_polynomial_leaf()) {
    const RationalPoly f = e.as_polynomial();
    const RationalPoly shifted = f.to_monomial().compose(RationalPoly::monomial({Rational(1), Rational(1)}));
    const RationalPoly d = (shifted - f.to_monomial()).in_basis(f.basis());
    if (d.degree() == 0) return FnExpr::constant(d.is_zero() ? Rational(0) : d.coeffs()[0]);
    return FnExpr::poly(d);
  }
  return FnExpr::delta(e);
}

namespace {

void require_unit_coefficient(const Rational& c, std::uint64_t p) {
  if (c == 0 || ord_p_rational(c, p) != 0) {
    fail(ErrorCode::kCDivisibleByP, "coefficient is not a " + std::to_string(p) + "-adic unit");
  }
}

}  // namespace

FnExpr build_measure_preserving(const FnExpr& v, const Rational& c, const Rational& d, std::uint64_t p) {
  require_unit_coefficient(c, p);
  const FnExpr linear = FnExpr::poly(RationalPoly::monomial({d, c}));
  return FnExpr::add(linear, FnExpr::mul(FnExpr::constant(Rational(p)), v));
}

FnExpr build_ergodic(const FnExpr& v, const Rational& c, std::uint64_t p) {
  require_unit_coefficient(c, p);
  const FnExpr shift = FnExpr::poly(RationalPoly::monomial({c, 1}));
  return FnExpr::add(shift, FnExpr::mul(FnExpr::constant(Rational(p)), FnExpr::delta(v)));
}

FnExpr build_ergodic_4_12(const FnExpr& g, std::uint64_t p) {
  if (!class_b_membership(g, p)) fail(ErrorCode::kNotClassB, "g is not recognisably in class B at p=" + std::to_string(p));
  const FnExpr shift = FnExpr::poly(RationalPoly::monomial({1, 1}));
  return FnExpr::add(shift, FnExpr::mul(FnExpr::constant(Rational(p * p)), g));
}

FnExpr build_composite_generator(const RationalPoly& u, const RationalPoly& v, const RationalPoly& w,
                                 const CompositeModulus& m) {
  const Rational r(m.radical());
  const FnExpr base = FnExpr::add(FnExpr::constant(1), FnExpr::mul(FnExpr::constant(r), FnExpr::poly(v)));
  const FnExpr tail =
      FnExpr::mul(FnExpr::mul(FnExpr::constant(r * r), FnExpr::poly(u)), FnExpr::pow(base, FnExpr::poly(w)));
  return FnExpr::add(FnExpr::poly(RationalPoly::monomial({1, 1})), tail);
}

// --- syntactic compatibility -------------------------------------------------

namespace {

bool set_reason(std::string* reason, std::string text) {
  if (reason) *reason = std::move(text);
  return false;
}

// Value of e at every residue mod p, or nullopt when evaluation fails.
std::optional<std::vector<u64>> values_mod_p(const FnExpr& e, std::uint64_t p) {
  try {
    const CompiledFn f(e, Modulus(p, 1));
    std::vector<u64> out;
    for (u64 x = 0; x < p; ++x) out.push_back(f(x));
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

bool syntactically_compatible(const FnExpr& e, std::uint64_t p, std::string* reason) {
  for (const auto& c : e.children()) {
    if (!syntactically_compatible(c, p, reason)) return false;
  }
  switch (e.kind()) {
    case NodeKind::kConst:
      if (e.value() != 0 && ord_p_rational(e.value(), p) < 0) {
        return set_reason(reason, "constant " + rational_text(e.value()) + " is not a p-adic integer");
      }
      return true;
    case NodeKind::kXor:
    case NodeKind::kAnd:
    case NodeKind::kOr:
    case NodeKind::kNeg:
      if (p != 2) return set_reason(reason, std::string(node_kind_name(e.kind())) + " requires p = 2");
      return true;
    case NodeKind::kPoly: {
      const MahlerSeries s = MahlerSeries::from_poly(e.polynomial(), p);
      if (s.degree() > kDefaultDegreeCap) return set_reason(reason, "polynomial degree exceeds the criteria cap");
      if (!s.is_integer_valued()) return set_reason(reason, "polynomial is not integer-valued over Z_p");
      if (!is_compatible(s)) return set_reason(reason, "polynomial fails the Mahler compatibility criterion");
      return true;
    }
    case NodeKind::kPow: {
      const auto vals = values_mod_p(e.child(0), p);
      if (!vals || std::any_of(vals->begin(), vals->end(), [&](u64 v) { return v != 1 % p; })) {
        return set_reason(reason, "exponent base is not 1 mod p at every residue");
      }
      return true;
    }
    case NodeKind::kInv: {
      const auto vals = values_mod_p(e.child(0), p);
      if (!vals || std::any_of(vals->begin(), vals->end(), [](u64 v) { return v == 0; })) {
        return set_reason(reason, "inverted expression vanishes mod p");
      }
      return true;
    }
    default: return true;
  }
}

// --- Boolean triangles -------------------------------------------------------

bool BoolPoly::eval(std::uint64_t assignment) const noexcept {
  bool acc = false;
  const std::uint64_t monomials = std::uint64_t{1} << arity;
  for (std::uint64_t m = 0; m < monomials; ++m) {
    if (((anf >> m) & 1) && (m & ~assignment) == 0) acc = !acc;
  }
  return acc;
}

std::uint64_t BoolPoly::weight() const noexcept {
  std::uint64_t w = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << arity); ++a) w += eval(a) ? 1 : 0;
  return w;
}

BoolTriangle BoolTriangle::from(std::vector<BoolPoly> psi) {
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (psi[i].arity != i) fail(ErrorCode::kInvalidArgument, "psi_" + std::to_string(i) + " must have arity " + std::to_string(i));
    if (i > 6) fail(ErrorCode::kInvalidArgument, "triangle functions support at most 7 digits");
    const unsigned monomials = 1u << i;
    if (monomials < 64 && (psi[i].anf >> monomials) != 0) {
      fail(ErrorCode::kInvalidArgument, "psi_" + std::to_string(i) + " references variables beyond x_" + std::to_string(i));
    }
  }
  return BoolTriangle{std::move(psi)};
}

std::uint64_t triangle_eval_word(const BoolTriangle& t, std::uint64_t x, unsigned n) {
  if (t.length() < n) {
    fail(ErrorCode::kLengthMismatch, "triangle of length " + std::to_string(t.length()) + " applied mod 2^" + std::to_string(n));
  }
  std::uint64_t out = 0;
  for (unsigned i = 0; i < n; ++i) {
    const std::uint64_t low = x & ((std::uint64_t{1} << i) - 1);
    const std::uint64_t bit = (t.psi[i].eval(low) ? 1u : 0u) ^ ((x >> i) & 1);
    out |= bit << i;
  }
  return out;
}

ResidueInt triangle_eval(const BoolTriangle& t, const ResidueInt& x) {
  if (x.modulus().prime() != 2) fail(ErrorCode::kNotBinaryModulus, "triangle functions act on Z/2^n");
  const unsigned n = x.modulus().exponent();
  if (n > 63) fail(ErrorCode::kInvalidArgument, "triangle modulus too large");
  return ResidueInt(BigInt(triangle_eval_word(t, static_cast<std::uint64_t>(x.residue()), n)), x.modulus());
}

}  // namespace pf
