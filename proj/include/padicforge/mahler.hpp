#pragma once

// Interpolation (Mahler) series f(x) = sum a_i C(x, i) with exact rational
// coefficients, the monomial/falling-factorial polynomial bases, and the
// coefficient criteria for compatibility, measure preservation and
// ergodicity.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "padicforge/padic.hpp"

namespace pf {

using Rational = boost::multiprecision::cpp_rational;

/// Series accepted by the criteria operations are truncated at this degree.
inline constexpr std::size_t kDefaultDegreeCap = 64;

enum class Basis { kMonomial, kFallingFactorial };

/// Polynomial with exact rational coefficients in a fixed basis.
class RationalPoly {
 public:
  RationalPoly() = default;
  RationalPoly(Basis basis, std::vector<Rational> coeffs);

  static RationalPoly monomial(std::vector<Rational> coeffs) { return {Basis::kMonomial, std::move(coeffs)}; }
  static RationalPoly falling(std::vector<Rational> coeffs) { return {Basis::kFallingFactorial, std::move(coeffs)}; }

  Basis basis() const noexcept { return basis_; }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  /// Degree of the polynomial; 0 for constants (including the zero polynomial).
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  RationalPoly to_monomial() const;
  RationalPoly to_falling() const;
  RationalPoly in_basis(Basis b) const { return b == Basis::kMonomial ? to_monomial() : to_falling(); }

  Rational eval(const Rational& x) const;
  /// Least common denominator of the coefficients.
  BigInt common_denominator() const;
  bool has_integer_coeffs() const { return common_denominator() == 1; }

  // Ring operations; the result is in the basis of the left operand
  // (multiplication and composition work in the monomial basis).
  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  RationalPoly scaled(const Rational& c) const;
  RationalPoly compose(const RationalPoly& inner) const;
  RationalPoly pow(unsigned e) const;

  std::string to_string() const;

  friend bool operator==(const RationalPoly& a, const RationalPoly& b);

 private:
  void trim();

  Basis basis_ = Basis::kMonomial;
  std::vector<Rational> coeffs_;
};

/// Stirling numbers of the first kind (signed) s(n, k) and second kind S(n, k), n, k <= n_max.
std::vector<std::vector<BigInt>> stirling_first_table(std::size_t n_max);
std::vector<std::vector<BigInt>> stirling_second_table(std::size_t n_max);

/// Truncated interpolation series a_0 .. a_d over a prime p.
class MahlerSeries {
 public:
  MahlerSeries(std::vector<Rational> coeffs, std::uint64_t p, unsigned precision_exponent = 0);

  static MahlerSeries from_poly(const RationalPoly& poly, std::uint64_t p);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  std::uint64_t prime() const noexcept { return p_; }
  /// Exponent of the working modulus the coefficients were extracted at (0: exact).
  unsigned precision_exponent() const noexcept { return precision_; }
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  /// Every coefficient has a denominator coprime to p.
  bool is_integer_valued() const;
  /// Exact value at an integer x >= 0.
  Rational value_at(const BigInt& x) const;

  std::string to_json() const;
  static MahlerSeries from_json(const std::string& text);

 private:
  std::vector<Rational> coeffs_;
  std::uint64_t p_;
  unsigned precision_;
};

/// a_i = Delta^i f(0) from the values f(0), ..., f(d).
MahlerSeries coeffs_from_values(std::span<const Rational> values, std::uint64_t p);

/// sum a_i C(x, i) mod p^k, evaluated at the canonical lift of x.
ResidueInt eval(const MahlerSeries& series, const ResidueInt& x);

/// p-adic valuation of a non-zero rational (may be negative).
long ord_p_rational(const Rational& q, std::uint64_t p);
/// Reduce a p-integral rational modulo p^k.
ResidueInt rational_to_residue(const Rational& q, const Modulus& m);

bool is_compatible(const MahlerSeries& series, std::size_t degree_cap = kDefaultDegreeCap);
bool is_measure_preserving_2adic(const MahlerSeries& series, std::size_t degree_cap = kDefaultDegreeCap);
bool is_ergodic_2adic(const MahlerSeries& series, std::size_t degree_cap = kDefaultDegreeCap);
/// Sufficient (not necessary) ergodicity test for odd p; false means "no verdict".
bool is_ergodic_sufficient_oddp(const MahlerSeries& series, std::size_t degree_cap = kDefaultDegreeCap);
/// Sufficient measure-preservation test for odd p.
bool is_measure_preserving_sufficient_oddp(const MahlerSeries& series, std::size_t degree_cap = kDefaultDegreeCap);

struct RhoLambda {
  unsigned rho;
  unsigned lambda;
};

/// rho = ord_p of the common denominator, lambda = least k with 2(p^k-1)/(p-1) - k > rho.
RhoLambda rho_lambda(const RationalPoly& poly, std::uint64_t p);
unsigned lambda_for_rho(unsigned rho, std::uint64_t p);

}  // namespace pf
