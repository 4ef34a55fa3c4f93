#include "doctest.h"
#include "oracles.hpp"
#include "padicforge/padic.hpp"

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

}  // namespace

TEST_CASE("modulus construction") {
  CHECK(Modulus(2, 8).value() == 256);
  CHECK(Modulus(5, 3).word() == 125);
  CHECK(Modulus(2, 100).value() == BigInt(1) << 100);
  CHECK_FALSE(Modulus(2, 63).fits_word());
  CHECK(code_of([] { Modulus(9, 2); }) == ErrorCode::kNotPrime);
  CHECK(code_of([] { Modulus(1, 2); }) == ErrorCode::kNotPrime);
  CHECK(code_of([] { Modulus(3, 0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("residue arithmetic requires one modulus") {
  const Modulus m(2, 4);
  const ResidueInt a(13, m);
  const ResidueInt b(7, m);
  CHECK((a + b).residue() == 4);
  CHECK((a - b).residue() == 6);
  CHECK((a * b).residue() == 91 % 16);
  CHECK((-a).residue() == 3);
  CHECK(ResidueInt(-1, m).residue() == 15);
  CHECK(code_of([&] { (void)(a + ResidueInt(1, Modulus(2, 5))); }) == ErrorCode::kMixedModuli);
  CHECK(a.reduce(2).residue() == 1);
}

TEST_CASE("ord_p") {
  CHECK(ord_p(12, 2) == 2u);
  CHECK_FALSE(ord_p(0, 5).has_value());
  CHECK(ord_p(250, 5) == 3u);
  CHECK(ord_p(-24, 2) == 3u);
  CHECK(ord_p_factorial(10, 2) == 8u);
  CHECK(floor_log(8, 2) == 3u);
  CHECK(floor_log(7, 2) == 2u);
  CHECK(floor_log(1, 5) == 0u);
}

TEST_CASE("digits") {
  CHECK(digits(ResidueInt(11, Modulus(2, 4))) == std::vector<std::uint64_t>{1, 1, 0, 1});
  CHECK(digits(ResidueInt(0, Modulus(3, 3))) == std::vector<std::uint64_t>{0, 0, 0});
  CHECK(digits(ResidueInt(250, Modulus(5, 4))) == std::vector<std::uint64_t>{0, 0, 0, 2});
}

TEST_CASE("binomials and falling factorials") {
  CHECK(binomial_eval(BigInt(5), 2, Modulus(2, 3)).residue() == 2);
  CHECK(binomial_eval(BigInt(123), 0, Modulus(7, 2)).residue() == 1);
  CHECK(binomial_eval(BigInt(7), 3, Modulus(5, 2)).residue() == 10);
  CHECK(falling_factorial(ResidueInt(5, Modulus(2, 4)), 2).residue() == 4);
  CHECK(falling_factorial(ResidueInt(9, Modulus(3, 2)), 0).residue() == 1);
  CHECK(falling_factorial(ResidueInt(3, Modulus(2, 6)), 6).residue() == 0);

  // C(x, i) from a lifted x against exact binomials.
  const Modulus target(2, 5);
  for (std::uint64_t i = 0; i <= 8; ++i) {
    const unsigned need = target.exponent() + ord_p_factorial(i, 2);
    for (long x = 0; x < 64; ++x) {
      const BigInt exact = oracle::binomial(x, static_cast<long>(i));
      const auto via_lift = binomial_eval(ResidueInt(BigInt(x), Modulus(2, need)), i, target);
      CHECK(via_lift.residue() == exact % 32);
    }
  }
}

TEST_CASE("inverses") {
  CHECK(mod_inverse(ResidueInt(3, Modulus(2, 4))).residue() == 11);
  CHECK(mod_inverse(ResidueInt(1, Modulus(7, 3))).residue() == 1);
  CHECK(mod_inverse(ResidueInt(7, Modulus(5, 3))).residue() == 18);
  CHECK(code_of([] { mod_inverse(ResidueInt(10, Modulus(5, 3))); }) == ErrorCode::kNotAUnit);
  for (std::uint64_t a = 1; a < 243; ++a) {
    if (a % 3 == 0) continue;
    CHECK(mod_inverse(ResidueInt(BigInt(a), Modulus(3, 5))).residue() == *oracle::inverse_scan(a, 243));
  }
}

TEST_CASE("unit powers") {
  const Modulus m(2, 4);
  CHECK(unit_pow(ResidueInt(3, m), ResidueInt(11, m)).residue() == 11);
  CHECK(unit_pow(ResidueInt(5, m), ResidueInt(0, m)).residue() == 1);
  CHECK(unit_pow(ResidueInt(201, m), ResidueInt(201, m)).residue() == 9);
  CHECK(oracle::powmod(201, 201, 16) == 9);
  CHECK(code_of([] { unit_pow(ResidueInt(2, Modulus(3, 2)), ResidueInt(1, Modulus(3, 2))); }) ==
        ErrorCode::kBaseNotOneUnit);
  // Exponent residue e mod p^k gives the same value as the integer e.
  const Modulus m5(5, 3);
  for (std::uint64_t e = 0; e < 125; ++e) {
    CHECK(unit_pow(ResidueInt(26, m5), ResidueInt(BigInt(e), m5)).residue() == oracle::powmod(26, e, 125));
  }
}

TEST_CASE("Lucas binomials") {
  CHECK(lucas_binomial_mod_p(7, 3, 2) == 1);
  CHECK(lucas_binomial_mod_p(5, 2, 5) == 0);
  CHECK(lucas_binomial_mod_p(10, 5, 3) == 0);
  for (long a = 0; a < 40; ++a) {
    for (long b = 0; b <= a; ++b) {
      const BigInt exact = oracle::binomial(a, b);
      CHECK(lucas_binomial_mod_p(a, b, 7) == static_cast<std::uint64_t>(exact % 7));
    }
  }
}

TEST_CASE("composite moduli") {
  const auto m = CompositeModulus::factor(100000);
  REQUIRE(m.factors().size() == 2);
  CHECK(m.factors()[0] == Modulus(2, 5));
  CHECK(m.factors()[1] == Modulus(5, 5));
  CHECK(m.radical() == 10);
  for (long x : {0L, 1L, 77777L, 99999L}) CHECK(m.combine(m.decompose(x)) == x);
  CHECK(code_of([] { CompositeModulus::factor(1); }) == ErrorCode::kInvalidArgument);
  CHECK(CompositeModulus::factor(BigInt(4294967311ULL) * 3).factors().size() == 2);
}
