#pragma once

// Expression algebra for compatible functions: an immutable AST over one
// variable x built from ring operations, bitwise operations (p = 2),
// exponentiation of 1-units, inversion of units, rational polynomials, the
// difference operator and composition.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "padicforge/mahler.hpp"
#include "padicforge/padic.hpp"

namespace pf {

enum class NodeKind {
  kVar,
  kConst,
  kAdd,
  kSub,
  kMul,
  kXor,
  kAnd,
  kOr,
  kNeg,
  kPow,
  kInv,
  kPoly,
  kDelta,
  kCompose,
};

std::string_view node_kind_name(NodeKind kind) noexcept;

/// Byte range of the DSL text a node was parsed from (empty for built nodes).
struct SourceSpan {
  int line = 0;
  int column = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

class FnExpr {
 public:
  static FnExpr var();
  static FnExpr constant(Rational value);
  static FnExpr poly(RationalPoly poly);
  static FnExpr add(FnExpr a, FnExpr b);
  static FnExpr sub(FnExpr a, FnExpr b);
  static FnExpr mul(FnExpr a, FnExpr b);
  static FnExpr bit_xor(FnExpr a, FnExpr b);
  static FnExpr bit_and(FnExpr a, FnExpr b);
  static FnExpr bit_or(FnExpr a, FnExpr b);
  /// Bitwise complement in Z/2^k: z -> 2^k - 1 - z.
  static FnExpr neg(FnExpr a);
  /// base^exponent for a base that is 1 mod p at every point.
  static FnExpr pow(FnExpr base, FnExpr exponent);
  static FnExpr inv(FnExpr a);
  static FnExpr delta(FnExpr a);
  /// outer(inner(x)).
  static FnExpr compose(FnExpr outer, FnExpr inner);

  NodeKind kind() const noexcept;
  std::span<const FnExpr> children() const noexcept;
  const FnExpr& child(std::size_t i) const { return children()[i]; }
  /// Value of a kConst node.
  const Rational& value() const;
  /// Polynomial of a kPoly node.
  const RationalPoly& polynomial() const;
  const SourceSpan& span() const noexcept;
  FnExpr with_span(SourceSpan span) const;

  /// VAR, CONST and POLY leaves are polynomials; returns their RationalPoly.
  bool is_polynomial_leaf() const noexcept;
  RationalPoly as_polynomial() const;

  bool uses_bitwise() const;
  std::size_t depth() const;
  std::size_t node_count() const;

  /// DSL text that parses back to an equivalent expression.
  std::string to_string() const;

  friend bool structurally_equal(const FnExpr& a, const FnExpr& b);

 private:
  struct Node;
  explicit FnExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static FnExpr make(NodeKind kind, std::vector<FnExpr> children);

  std::shared_ptr<const Node> node_;
};

/// Evaluation of an expression modulo one prime power, compiled once.
/// Values are canonical residues. A 64-bit path is used when every lifted
/// modulus fits in 63 bits; otherwise arithmetic falls back to BigInt.
class CompiledFn {
 public:
  CompiledFn(const FnExpr& expr, const Modulus& modulus);

  const Modulus& modulus() const noexcept { return modulus_; }
  bool word_path() const noexcept { return word_path_; }

  std::uint64_t operator()(std::uint64_t x) const;
  BigInt eval_big(const BigInt& x) const;

  struct Impl;

 private:
  Modulus modulus_;
  bool word_path_;
  std::shared_ptr<const Impl> impl_;
};

ResidueInt eval_expr(const FnExpr& e, const ResidueInt& x);
/// Componentwise evaluation modulo a composite modulus, recombined by CRT.
BigInt eval_expr(const FnExpr& e, const BigInt& x, const CompositeModulus& m);

/// AST computing e(x + 1) - e(x).
FnExpr delta(const FnExpr& e);

/// d + c x + p v(x); bijective modulo every p^k when c is a unit.
FnExpr build_measure_preserving(const FnExpr& v, const Rational& c, const Rational& d, std::uint64_t p);
/// c + x + p (v(x+1) - v(x)); ergodic when c is a unit.
FnExpr build_ergodic(const FnExpr& v, const Rational& c, std::uint64_t p);
/// 1 + x + p^2 g(x) for g in class B.
FnExpr build_ergodic_4_12(const FnExpr& g, std::uint64_t p);
/// 1 + x + r^2 u(x) (1 + r v(x))^w(x) with r the product of the primes of m.
FnExpr build_composite_generator(const RationalPoly& u, const RationalPoly& v, const RationalPoly& w,
                                 const CompositeModulus& m);

/// Syntactic compatibility over Z_p: every node is a compatible primitive,
/// POLY nodes pass the Mahler criterion, POW bases are 1-units and INV
/// arguments are units at every residue mod p. `reason` names the first failure.
bool syntactically_compatible(const FnExpr& e, std::uint64_t p, std::string* reason = nullptr);

// --- Boolean triangle transformations (p = 2) -----------------------------

/// Boolean polynomial in algebraic normal form over variables x_0..x_{arity-1};
/// bit m of `anf` is the coefficient of the monomial prod_{j in m} x_j.
struct BoolPoly {
  unsigned arity = 0;
  std::uint64_t anf = 0;

  bool eval(std::uint64_t assignment) const noexcept;
  /// Number of satisfying assignments.
  std::uint64_t weight() const noexcept;
};

/// f(x) = sum_i (psi_i(x_0..x_{i-1}) xor x_i) 2^i.
struct BoolTriangle {
  std::vector<BoolPoly> psi;  // psi[i].arity == i

  static BoolTriangle from(std::vector<BoolPoly> psi);
  std::size_t length() const noexcept { return psi.size(); }
};

ResidueInt triangle_eval(const BoolTriangle& t, const ResidueInt& x);
std::uint64_t triangle_eval_word(const BoolTriangle& t, std::uint64_t x, unsigned n);

}  // namespace pf
