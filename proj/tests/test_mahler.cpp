#include "doctest.h"
#include "oracles.hpp"
#include "padicforge/mahler.hpp"

using namespace pf;

namespace {

std::vector<Rational> R(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

MahlerSeries from_values(std::initializer_list<long> v, std::uint64_t p) {
  const auto vals = R(v);
  return coeffs_from_values(vals, p);
}

}  // namespace

TEST_CASE("basis conversion round-trips") {
  const auto f = RationalPoly::monomial({Rational(1), Rational(-3), Rational(5, 2), Rational(0), Rational(7, 18)});
  CHECK(f.to_falling().to_monomial() == f);
  for (long x = -5; x <= 5; ++x) CHECK(f.to_falling().eval(x) == f.eval(x));
  const auto g = RationalPoly::falling({Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(0),
                                        Rational(5, 18)});
  CHECK(g.eval(7) == Rational(5, 18) * 5040);
  CHECK(g.degree() == 6);
  CHECK(g.common_denominator() == 18);
}

TEST_CASE("Stirling tables") {
  const auto s1 = stirling_first_table(6);
  const auto s2 = stirling_second_table(6);
  CHECK(s1[4][2] == 11);
  CHECK(s1[5][1] == 24);
  CHECK(s2[5][2] == 15);
  CHECK(s2[6][3] == 90);
}

TEST_CASE("coefficients from values") {
  CHECK(from_values({0, 1, 4}, 2).coeffs() == R({0, 1, 2}));
  CHECK(from_values({7}, 3).coeffs() == R({7}));
  CHECK(from_values({0, 0, 0, 1}, 5).coeffs() == R({0, 0, 0, 1}));
  // Round trip: a polynomial's series reproduces its values.
  const auto f = RationalPoly::monomial({Rational(3), Rational(1, 3), Rational(0), Rational(2, 3)});
  const auto s = MahlerSeries::from_poly(f, 2);
  for (long x = 0; x < 20; ++x) CHECK(s.value_at(x) == f.eval(x));
}

TEST_CASE("series evaluation") {
  const auto sq = from_values({0, 1, 4}, 2);
  CHECK(eval(sq, ResidueInt(3, Modulus(2, 4))).residue() == 9);
  const MahlerSeries one_plus_x(R({1, 1}), 7);
  CHECK(eval(one_plus_x, ResidueInt(6, Modulus(7, 1))).residue() == 0);
  const auto ff6 = MahlerSeries::from_poly(
      RationalPoly::falling({Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(5, 18)}), 5);
  CHECK(eval(ff6, ResidueInt(7, Modulus(5, 3))).residue() == 25);
  // Against exact values at every residue.
  const Modulus m(5, 3);
  for (long x = 0; x < 125; ++x) {
    CHECK(eval(ff6, ResidueInt(x, m)).residue() == *oracle::reduce(ff6.value_at(x), 125));
  }
}

TEST_CASE("compatibility criterion") {
  CHECK(is_compatible(from_values({0, 1, 4}, 2)));
  CHECK_FALSE(is_compatible(MahlerSeries(R({0, 0, 1}), 2)));
  CHECK(is_compatible(MahlerSeries(R({4, 1}), 3)));
  // Brute force agrees on C(x, 2) mod 4.
  const auto t = *oracle::table([](long x) { return Rational(x * (x - 1) / 2); }, 4);
  CHECK_FALSE(oracle::compatible(t, 2));
}

TEST_CASE("2-adic measure preservation and ergodicity") {
  CHECK(is_measure_preserving_2adic(MahlerSeries(R({0, 1}), 2)));
  CHECK_FALSE(is_measure_preserving_2adic(MahlerSeries(R({0, 1, 2}), 2)));
  CHECK(is_measure_preserving_2adic(MahlerSeries(R({0, 1, 4}), 2)));
  {
    const auto t = *oracle::table([](long x) { return Rational(x + 2 * x * (x - 1)); }, 8);
    CHECK(oracle::bijective(t));
    const auto t2 = *oracle::table([](long x) { return Rational(x * x); }, 4);
    CHECK_FALSE(oracle::bijective(t2));
  }
  CHECK(is_ergodic_2adic(MahlerSeries(R({1, 1}), 2)));
  CHECK(is_ergodic_2adic(MahlerSeries(R({3, 1}), 2)));
  CHECK_FALSE(is_ergodic_2adic(MahlerSeries(R({0, 1}), 2)));
  CHECK_FALSE(is_ergodic_2adic(MahlerSeries(R({1, 3}), 2)));

  // 1 + x + 4(-1)^(1+x): a_0 = -3, a_1 = 1 + 8 ... from the value table.
  std::vector<Rational> vals;
  for (long x = 0; x <= 64; ++x) vals.emplace_back(1 + x + (x % 2 == 0 ? -4 : 4));
  const auto s = coeffs_from_values(vals, 2);
  CHECK(s.coeffs()[0] == -3);
  for (std::size_t j = 2; j < s.coeffs().size(); ++j) {
    const long sign = j % 2 == 0 ? -1 : 1;
    CHECK(s.coeffs()[j] == Rational(BigInt(sign) * (BigInt(1) << (j + 2))));
  }
  CHECK(is_compatible(s));
  CHECK(is_ergodic_2adic(s));
}

TEST_CASE("odd-p sufficient ergodicity") {
  CHECK(is_ergodic_sufficient_oddp(MahlerSeries(R({1, 1}), 5)));
  CHECK(is_ergodic_sufficient_oddp(MahlerSeries(R({1, 1, 25}), 5)));
  CHECK_FALSE(is_ergodic_sufficient_oddp(MahlerSeries(R({0, 2}), 5)));
  const auto t = *oracle::table([](long x) { return Rational(1 + x + 25 * (x * (x - 1) / 2)); }, 125);
  CHECK(oracle::transitive(t));
}

TEST_CASE("rho and lambda") {
  const auto integral = RationalPoly::monomial({Rational(1), Rational(7), Rational(-3)});
  CHECK(rho_lambda(integral, 2).rho == 0);
  CHECK(rho_lambda(integral, 2).lambda == 1);
  CHECK(rho_lambda(integral, 5).lambda == 1);
  const auto ff6 = RationalPoly::falling({Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(0), Rational(5, 18)});
  CHECK(rho_lambda(ff6, 2).rho == 1);
  CHECK(rho_lambda(ff6, 2).lambda == 2);
  CHECK(rho_lambda(ff6, 3).rho == 2);
  CHECK(rho_lambda(ff6, 5).rho == 0);
  CHECK(rho_lambda(ff6, 5).lambda == 1);
  // Direct inequality: least k with 2(p^k - 1)/(p - 1) - k > rho.
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (unsigned rho = 0; rho < 20; ++rho) {
      unsigned k = 1;
      while (2 * (oracle::pow_u64(p, k) - 1) / (p - 1) - k <= rho) ++k;
      CHECK(lambda_for_rho(rho, p) == k);
    }
  }
}

TEST_CASE("integer-valuedness and JSON") {
  const auto half = MahlerSeries::from_poly(RationalPoly::monomial({Rational(0), Rational(1, 2)}), 2);
  CHECK_FALSE(half.is_integer_valued());
  CHECK(MahlerSeries::from_poly(RationalPoly::monomial({Rational(0), Rational(1, 2)}), 3).is_integer_valued());
  const auto s = MahlerSeries(std::vector<Rational>{Rational(1), Rational(-5, 3), Rational(7)}, 2);
  const auto back = MahlerSeries::from_json(s.to_json());
  CHECK(back.coeffs() == s.coeffs());
  CHECK(back.prime() == 2);
  CHECK(ord_p_rational(Rational(5, 18), 2) == -1);
  CHECK(ord_p_rational(Rational(50, 3), 5) == 2);
  CHECK(rational_to_residue(Rational(5, 18), Modulus(5, 3)).residue() == *oracle::reduce(Rational(5, 18), 125));
}
