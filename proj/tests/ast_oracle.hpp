#pragma once

// Random compatible expressions with a test-local evaluator mod p^k. The
// tree type here is separate from FnExpr; to_fn only maps it node by node.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "padicforge/expr.hpp"

namespace oracle {

struct Node {
  enum Kind { kVar, kConst, kAdd, kSub, kMul, kXor, kAnd, kOr, kNeg, kPow, kInv, kPoly, kDelta, kCompose };
  Kind kind = kVar;
  long value = 0;          // kConst
  std::vector<long> poly;  // kPoly, monomial coefficients over den
  long den = 1;
  std::vector<std::shared_ptr<Node>> ch;
};
using NodeP = std::shared_ptr<Node>;

inline NodeP mk(Node::Kind k, std::vector<NodeP> ch = {}, long v = 0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->ch = std::move(ch);
  n->value = v;
  return n;
}

class AstGen {
 public:
  AstGen(std::uint64_t seed, long p) : p_(p), rng_(seed), bitwise_(p == 2) {}

  NodeP gen(unsigned depth) {
    if (depth == 0) return leaf();
    const int choice = pick(bitwise_ ? 13 : 9);
    switch (choice) {
      case 0: return leaf();
      case 1: return mk(Node::kAdd, {gen(depth - 1), gen(depth - 1)});
      case 2: return mk(Node::kSub, {gen(depth - 1), gen(depth - 1)});
      case 3: return mk(Node::kMul, {gen(depth - 1), gen(depth - 1)});
      case 4: return mk(Node::kPow, {one_unit(depth - 1), gen(depth - 1)});
      case 5: return mk(Node::kInv, {one_unit(depth - 1)});
      case 6: return mk(Node::kDelta, {gen(depth - 1)});
      case 7: return mk(Node::kCompose, {gen(depth - 1), gen(depth - 1)});
      case 8: return poly_node();
      case 9: return mk(Node::kXor, {gen(depth - 1), gen(depth - 1)});
      case 10: return mk(Node::kAnd, {gen(depth - 1), gen(depth - 1)});
      case 11: return mk(Node::kOr, {gen(depth - 1), gen(depth - 1)});
      default: return mk(Node::kNeg, {gen(depth - 1)});
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  NodeP leaf() {
    if (pick(2) == 0) return mk(Node::kVar);
    return mk(Node::kConst, {}, pick(41) - 20);
  }

  NodeP poly_node() {
    auto n = mk(Node::kPoly);
    n->den = p_ == 3 ? 2 : 3;
    const int deg = 1 + pick(3);
    for (int i = 0; i <= deg; ++i) n->poly.push_back(pick(13) - 6);
    return n;
  }

  // 1 + p * g, which is a 1-unit for every p.
  NodeP one_unit(unsigned depth) {
    return mk(Node::kAdd, {mk(Node::kConst, {}, 1), mk(Node::kMul, {mk(Node::kConst, {}, p_), gen(depth)})});
  }

  long p_;
  std::mt19937_64 rng_;
  bool bitwise_;
};

// Value of sum c[i] x^i / den mod m.
inline u64 eval_poly(const std::vector<long>& c, long den, u64 x, u64 m) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * Rational(BigInt(x)) + *it;
  return *reduce(acc / den, m);
}

inline u64 inverse_unit(u64 a, u64 p, u64 m) {
  // Euler: a^(phi(m) - 1).
  const u64 phi = m / p * (p - 1);
  return powmod(a, phi - 1, m);
}

inline u64 eval(const Node& n, u64 x, u64 p, u64 m) {
  auto sub = [&](std::size_t i, u64 at) { return eval(*n.ch[i], at, p, m); };
  switch (n.kind) {
    case Node::kVar: return x;
    case Node::kConst: return static_cast<u64>(((n.value % static_cast<long>(m)) + static_cast<long>(m)) % static_cast<long>(m));
    case Node::kAdd: return (sub(0, x) + sub(1, x)) % m;
    case Node::kSub: return (sub(0, x) + m - sub(1, x)) % m;
    case Node::kMul: return mulmod(sub(0, x), sub(1, x), m);
    case Node::kXor: return sub(0, x) ^ sub(1, x);
    case Node::kAnd: return sub(0, x) & sub(1, x);
    case Node::kOr: return sub(0, x) | sub(1, x);
    case Node::kNeg: return m - 1 - sub(0, x);
    case Node::kPow: return powmod(sub(0, x), sub(1, x), m);
    case Node::kInv: return inverse_unit(sub(0, x), p, m);
    case Node::kPoly: return eval_poly(n.poly, n.den, x, m);
    case Node::kDelta: return (sub(0, (x + 1) % m) + m - sub(0, x)) % m;
    case Node::kCompose: return sub(0, sub(1, x));
  }
  return 0;
}

inline pf::FnExpr to_fn(const Node& n) {
  using pf::FnExpr;
  auto c = [&](std::size_t i) { return to_fn(*n.ch[i]); };
  switch (n.kind) {
    case Node::kVar: return FnExpr::var();
    case Node::kConst: return FnExpr::constant(Rational(n.value));
    case Node::kAdd: return FnExpr::add(c(0), c(1));
    case Node::kSub: return FnExpr::sub(c(0), c(1));
    case Node::kMul: return FnExpr::mul(c(0), c(1));
    case Node::kXor: return FnExpr::bit_xor(c(0), c(1));
    case Node::kAnd: return FnExpr::bit_and(c(0), c(1));
    case Node::kOr: return FnExpr::bit_or(c(0), c(1));
    case Node::kNeg: return FnExpr::neg(c(0));
    case Node::kPow: return FnExpr::pow(c(0), c(1));
    case Node::kInv: return FnExpr::inv(c(0));
    case Node::kPoly: {
      std::vector<Rational> co;
      for (long v : n.poly) co.emplace_back(v, n.den);
      return FnExpr::poly(pf::RationalPoly::monomial(co));
    }
    case Node::kDelta: return FnExpr::delta(c(0));
    case Node::kCompose: return FnExpr::compose(c(0), c(1));
  }
  return FnExpr::var();
}

inline std::vector<u64> table_of(const Node& n, u64 p, u64 m) {
  std::vector<u64> t(m);
  for (u64 x = 0; x < m; ++x) t[x] = eval(n, x, p, m);
  return t;
}

// c + x + p (v(x + 1) - v(x)) as an oracle tree.
inline NodeP ergodic_of(const NodeP& v, long c, long p) {
  return mk(Node::kAdd, {mk(Node::kAdd, {mk(Node::kConst, {}, c), mk(Node::kVar)}),
                         mk(Node::kMul, {mk(Node::kConst, {}, p), mk(Node::kDelta, {v})})});
}

}  // namespace oracle
