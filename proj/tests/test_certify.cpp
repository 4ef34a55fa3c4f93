#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "padicforge/certify.hpp"
#include "padicforge/dsl.hpp"

using namespace pf;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::vector<std::uint64_t> table(const FnExpr& e, const Modulus& m) {
  const CompiledFn f(e, m);
  std::vector<std::uint64_t> t(m.word());
  for (std::uint64_t x = 0; x < t.size(); ++x) t[x] = f(x);
  return t;
}

MultiPoly uni(std::initializer_list<long> coeffs) {
  MultiPoly f;
  f.arity = 1;
  unsigned e = 0;
  for (long c : coeffs) {
    if (c != 0) f.add_term(BigInt(c), {e});
    ++e;
  }
  return f;
}

}  // namespace

TEST_CASE("bijectivity") {
  CHECK(bijective_mod(parse_dsl("x + 5"), Modulus(3, 4)).bijective);
  const auto sq = bijective_mod(parse_dsl("x^2"), Modulus(2, 2));
  CHECK_FALSE(sq.bijective);
  REQUIRE(sq.collision.has_value());
  CHECK(sq.collision->first == 0);
  CHECK(sq.collision->second == 2);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    const auto f = parse_dsl("1 + x^" + std::to_string(p));
    CHECK(bijective_mod(f, Modulus(p, 1)).bijective);
    CHECK_FALSE(bijective_mod(f, Modulus(p, 2)).bijective);
  }
  Limits tiny;
  tiny.cap_states = 100;
  CHECK(code_of([&] { bijective_mod(parse_dsl("x"), Modulus(2, 8), tiny); }) == ErrorCode::kCapExceeded);
}

TEST_CASE("transitivity") {
  const auto r = transitive_mod(parse_dsl("1 + x"), Modulus(7, 3));
  CHECK(r.transitive);
  CHECK(r.orbit_length == 343);
  // Affine maps mod 2^k against the orbit walk of an independent table.
  for (unsigned k = 3; k <= 10; ++k) {
    const Modulus m(2, k);
    for (std::uint64_t a = 0; a < 8; ++a) {
      for (std::uint64_t b = 0; b < 8; ++b) {
        const auto f = parse_dsl(std::to_string(a) + " + " + std::to_string(b) + "*x");
        const bool want = a % 2 == 1 && b % 4 == 1;
        CHECK(transitive_mod(f, m).transitive == want);
        const auto t = *oracle::table([&](long x) { return Rational(static_cast<long>(a) + static_cast<long>(b) * x); },
                                      m.word());
        CHECK(oracle::transitive(t) == want);
      }
    }
  }
  const auto x = transitive_mod(parse_dsl("x"), Modulus(3, 2));
  CHECK_FALSE(x.transitive);
  CHECK(x.orbit_length == 1);
  const auto sq = transitive_mod(parse_dsl("x^2 + 1"), Modulus(2, 3));
  CHECK_FALSE(sq.transitive);
  CHECK(sq.status == OrbitStatus::kNotBijective);
}

TEST_CASE("compatibility by brute force") {
  CHECK(compatible_mod(parse_dsl("x xor (2*x + 1)"), Modulus(2, 8)).compatible);
  const WordMap shift = [](std::uint64_t x) { return x / 2; };
  const auto r = compatible_mod(shift, Modulus(2, 4));
  CHECK_FALSE(r.compatible);
  REQUIRE(r.witness.has_value());
  std::vector<std::uint64_t> t(16);
  for (std::uint64_t v = 0; v < 16; ++v) t[v] = v / 2;
  CHECK_FALSE(oracle::compatible(t, 2));
}

TEST_CASE("equiprobability") {
  MultiPoly f;
  f.arity = 2;
  f.add_term(2, {1, 0}).add_term(1, {0, 3});
  for (unsigned k = 1; k <= 8; ++k) {
    const auto r = equiprobable_mod({f}, 2, Modulus(2, k));
    CHECK(r.equiprobable);
    CHECK(r.fiber_min == oracle::pow_u64(2, k));
    CHECK(r.fiber_max == oracle::pow_u64(2, k));
  }
  // Independent fiber census at k = 5.
  std::vector<std::uint64_t> fib(32, 0);
  for (std::uint64_t x = 0; x < 32; ++x) {
    for (std::uint64_t y = 0; y < 32; ++y) ++fib[(2 * x + y * y * y) % 32];
  }
  for (auto c : fib) CHECK(c == 32);

  MultiPoly xy;
  xy.arity = 2;
  xy.add_term(1, {1, 1});
  const auto r = equiprobable_mod({xy}, 2, Modulus(2, 1));
  CHECK_FALSE(r.equiprobable);
  CHECK(r.fiber_max == 3);
  CHECK(equiprobable_mod({uni({0, 1})}, 1, Modulus(3, 3)).equiprobable);
}

TEST_CASE("Jacobian and mod p^2 certificates") {
  MultiPoly phi;
  phi.arity = 2;
  phi.add_term(1, {1, 0}).add_term(3, {0, 1}).add_term(6, {0, 2}).add_term(4, {0, 3});
  CHECK(jacobian_equiprobable_certificate({phi}, 2, 2).verdict == Verdict::kProven);

  MultiPoly g;
  g.arity = 2;
  g.add_term(2, {1, 0}).add_term(1, {0, 3});
  const auto c = jacobian_equiprobable_certificate({g}, 2, 2);
  CHECK(c.verdict == Verdict::kUnknown);
  CHECK(c.rule == Rule::kJacobianModP);

  for (std::uint64_t p : {2, 3, 5}) {
    CHECK(jacobian_equiprobable_certificate({uni({0, 1, static_cast<long>(p)})}, 1, p).verdict == Verdict::kProven);
    CHECK(polynomial_bijectivity_certificate({uni({0, 1, static_cast<long>(p)})}, p).verdict == Verdict::kProven);
    CHECK(polynomial_bijectivity_certificate({uni({0, 1})}, p).verdict == Verdict::kProven);
    MultiPoly f;
    f.arity = 1;
    f.add_term(1, {0}).add_term(1, {static_cast<unsigned>(p)});
    const auto r = polynomial_bijectivity_certificate({f}, p);
    CHECK(r.verdict == Verdict::kRefuted);
    CHECK_FALSE(r.witness_json.empty());
    CHECK(r.rule == Rule::kBijectiveModP2);
  }
}

TEST_CASE("class inference and thresholds") {
  const auto zp = infer_class(parse_dsl("1 + 3*x + x^2"), 2);
  CHECK(zp.tag == ClassTag::kZPoly);
  const auto qp = infer_class(parse_dsl("1 + x + (5/18)*ff(x,6)"), 2);
  CHECK(qp.tag == ClassTag::kQpPolyIntval);
  CHECK(qp.degree == 6);
  CHECK(threshold_exponent(qp, Property::kErgodic, 2) == 5u);
  const auto b = infer_class(parse_dsl("1 + x + 201^x"), 5);
  CHECK(b.tag == ClassTag::kClassB);
  CHECK(threshold_exponent(b, Property::kErgodic, 5) == 2u);
  CHECK(threshold_exponent(infer_class(parse_dsl("1 + x + 201^x"), 2), Property::kErgodic, 2) == 3u);
  CHECK(threshold_exponent(infer_class(parse_dsl("1 + x + 4^x"), 3), Property::kErgodic, 3) == 3u);
  CHECK(infer_class(parse_dsl("x xor 1"), 2).tag == ClassTag::kGenericCompatible);
  CHECK_FALSE(threshold_exponent(infer_class(parse_dsl("x xor 1"), 2), Property::kErgodic, 2).has_value());
}

TEST_CASE("certificates") {
  const auto c = certify(parse_dsl("1 + x + (5/18)*ff(x,6)"), Property::kErgodic, 2);
  CHECK(c.verdict == Verdict::kProven);
  CHECK(c.checked_modulus.exponent() >= 5);

  const auto b = certify(parse_dsl("1 + x + 201^x"), Property::kErgodic, 5);
  CHECK(b.verdict == Verdict::kProven);

  const auto id = certify(parse_dsl("x"), Property::kErgodic, 3);
  CHECK(id.verdict == Verdict::kRefuted);
  CHECK_FALSE(id.witness_json.empty());

  CHECK(certify(parse_dsl("x + 3*x^3"), Property::kMeasurePreserving, 3).verdict == Verdict::kProven);
  CHECK(certify(parse_dsl("1 + x^3"), Property::kMeasurePreserving, 3).verdict == Verdict::kRefuted);
  CHECK(certify(parse_dsl("x"), Property::kMeasurePreserving, 7).verdict == Verdict::kProven);
  CHECK(certify(parse_dsl("x^2"), Property::kCompatible, 2).verdict == Verdict::kProven);
  CHECK(certify(parse_dsl("(1/2)*x*(x-1)"), Property::kCompatible, 2).verdict == Verdict::kRefuted);

  // Generic functions: brute force can only refute.
  const auto g = certify(parse_dsl("1 + x + 2*((x+1) xor x)"), Property::kErgodic, 2, 10);
  CHECK(g.rule == Rule::kBruteOnly);
  CHECK(g.verdict != Verdict::kProven);
  const auto d = certify(parse_dsl("1 + x + 2*delta(x xor (2*x + 1))"), Property::kErgodic, 2);
  CHECK(d.verdict == Verdict::kProven);
  CHECK(d.rule == Rule::kLinearPlusPDifference);
  const auto h = certify(parse_dsl("x xor 1"), Property::kErgodic, 2, 8);
  CHECK(h.verdict == Verdict::kRefuted);

  const auto j = nlohmann::json::parse(b.to_json());
  CHECK(j.at("property") == "ERGODIC");
  CHECK(j.at("verdict") == "PROVEN");
  CHECK(j.at("modulus").at("p") == 5);
  CHECK(j.contains("theorem"));
  CHECK(j.contains("elapsed_ms"));
}

TEST_CASE("triangle certificates") {
  const BoolPoly one{0, 1};
  CHECK(triangle_certificate(BoolTriangle::from({one, BoolPoly{1, 0b10}})).verdict == Verdict::kProven);
  CHECK(triangle_certificate(BoolTriangle::from({one, BoolPoly{1, 0}})).verdict == Verdict::kRefuted);
  CHECK(triangle_certificate(BoolTriangle::from({BoolPoly{0, 0}})).verdict == Verdict::kRefuted);
}

TEST_CASE("class B membership") {
  CHECK(class_b_membership(parse_dsl("x^3 + 7*x"), 5));
  CHECK(class_b_membership(parse_dsl("(1 + 2*x)^x"), 2));
  CHECK(class_b_membership(parse_dsl("inv(1 + 3*x)"), 3));
  CHECK_FALSE(class_b_membership(parse_dsl("inv(x)"), 3));
  CHECK_FALSE(class_b_membership(parse_dsl("x xor 1"), 2));
  CHECK_FALSE(class_b_membership(parse_dsl("(1/2)*x"), 2));
}

TEST_CASE("derivative modulo p^2") {
  const auto sq = MahlerSeries::from_poly(RationalPoly::monomial({Rational(0), Rational(0), Rational(1)}), 5);
  const Modulus m(5, 2);
  for (std::uint64_t x = 0; x < 25; ++x) {
    CHECK(derivative_mod_p(sq, ResidueInt(BigInt(x), m), 1).residue() == 2 * x % 25);
  }
  const auto c = MahlerSeries::from_poly(RationalPoly::monomial({Rational(9)}), 5);
  const auto id = MahlerSeries::from_poly(RationalPoly::monomial({Rational(0), Rational(1)}), 5);
  for (std::uint64_t x = 0; x < 25; ++x) {
    CHECK(derivative_mod_p(c, ResidueInt(BigInt(x), m), 1).residue() == 0);
    CHECK(derivative_mod_p(id, ResidueInt(BigInt(x), m), 1).residue() == 1);
  }
  // Formal derivative, and difference quotients (f(x + p^2 h) - f(x)) / (p^2 h) mod p^2.
  const RationalPoly cubic = RationalPoly::monomial({Rational(1), Rational(2), Rational(0), Rational(3)});
  const auto s = MahlerSeries::from_poly(cubic, 5);
  for (long x = 0; x < 125; ++x) {
    const auto d = derivative_mod_p(s, ResidueInt(BigInt(x), m), 1).residue();
    CHECK(d == (2 + 9 * x * x) % 25);
    for (long h = 1; h < 5; ++h) {
      const Rational q = (cubic.eval(x + 25 * h) - cubic.eval(x)) / Rational(25 * h);
      CHECK(d == *oracle::reduce(q, 25));
    }
  }
}

TEST_CASE("Hensel monotonicity and threshold soundness") {
  std::mt19937_64 rng(5);
  for (std::uint64_t p : {2, 3, 5}) {
    for (int n = 0; n < 30; ++n) {
      std::vector<Rational> c(4);
      for (auto& v : c) v = Rational(static_cast<long>(rng() % 7) - 3);
      c[0] = 1;
      c[1] = 1 + static_cast<long>(p) * static_cast<long>(rng() % 3);
      const FnExpr f = FnExpr::poly(RationalPoly::monomial(c));
      const unsigned kmax = p == 2 ? 12 : (p == 3 ? 7 : 5);
      bool prev = true;
      for (unsigned k = 1; k <= kmax; ++k) {
        const bool now = oracle::transitive(table(f, Modulus(p, k)));
        if (!prev) CHECK_FALSE(now);
        prev = now;
      }
      const auto cert = certify(f, Property::kErgodic, p);
      if (cert.verdict == Verdict::kProven) {
        CHECK(oracle::transitive(table(f, Modulus(p, kmax))));
      } else if (cert.verdict == Verdict::kRefuted) {
        CHECK_FALSE(oracle::transitive(table(f, Modulus(p, kmax))));
      }
    }
  }
}
