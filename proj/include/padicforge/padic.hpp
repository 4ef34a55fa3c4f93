#pragma once

// Exact arithmetic in Z/p^k and the p-adic primitives the rest of the
// library is built on: valuations, base-p digits, binomials, inverses and
// exponentiation of 1-units.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "padicforge/error.hpp"

namespace pf {

using BigInt = boost::multiprecision::cpp_int;

/// A prime power p^k with k >= 1. The prime is verified by trial division.
class Modulus {
 public:
  Modulus(std::uint64_t p, unsigned k);

  std::uint64_t prime() const noexcept { return p_; }
  unsigned exponent() const noexcept { return k_; }
  const BigInt& value() const noexcept { return value_; }

  /// True when p^k fits in 63 bits (the fast evaluation path).
  bool fits_word() const noexcept { return value_ < (BigInt(1) << 63); }
  std::uint64_t word() const;

  /// Same prime, different exponent.
  Modulus with_exponent(unsigned k) const { return Modulus(p_, k); }

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
    return a.p_ == b.p_ && a.k_ == b.k_;
  }

  std::string to_string() const;

 private:
  std::uint64_t p_;
  unsigned k_;
  BigInt value_;
};

bool is_prime(std::uint64_t n) noexcept;
BigInt pow_big(std::uint64_t base, unsigned exponent);

/// An element of Z/p^k. Arithmetic requires both operands to share a modulus.
class ResidueInt {
 public:
  ResidueInt(BigInt value, Modulus modulus);
  ResidueInt(std::int64_t value, Modulus modulus) : ResidueInt(BigInt(value), std::move(modulus)) {}

  const BigInt& residue() const noexcept { return residue_; }
  const Modulus& modulus() const noexcept { return modulus_; }

  ResidueInt operator+(const ResidueInt& o) const;
  ResidueInt operator-(const ResidueInt& o) const;
  ResidueInt operator*(const ResidueInt& o) const;
  ResidueInt operator-() const;

  /// Reduce into Z/p^j for j <= k.
  ResidueInt reduce(unsigned j) const;
  bool is_unit() const;

  friend bool operator==(const ResidueInt& a, const ResidueInt& b) {
    return a.modulus_ == b.modulus_ && a.residue_ == b.residue_;
  }

 private:
  void require_same(const ResidueInt& o) const;

  BigInt residue_;
  Modulus modulus_;
};

/// Product of prime powers with strictly increasing primes.
class CompositeModulus {
 public:
  explicit CompositeModulus(std::vector<Modulus> factors);

  /// Factor m by trial division (m >= 2).
  static CompositeModulus factor(const BigInt& m);
  static CompositeModulus of(const Modulus& single) { return CompositeModulus({single}); }

  const std::vector<Modulus>& factors() const noexcept { return factors_; }
  const BigInt& value() const noexcept { return value_; }
  /// Product of the distinct primes.
  BigInt radical() const;

  std::vector<BigInt> decompose(const BigInt& x) const;
  BigInt combine(const std::vector<BigInt>& residues) const;

  std::string to_string() const;

 private:
  std::vector<Modulus> factors_;
  BigInt value_;
};

/// p-adic valuation; std::nullopt stands for the infinite order of 0.
std::optional<unsigned> ord_p(const BigInt& n, std::uint64_t p);
/// ord_p(i!) by Legendre's formula.
unsigned ord_p_factorial(std::uint64_t i, std::uint64_t p);
/// floor(log_p i) for i >= 1.
unsigned floor_log(std::uint64_t i, std::uint64_t p);

/// Base-p digits of the residue, least significant first, exactly k of them.
std::vector<std::uint64_t> digits(const ResidueInt& x);

/// C(x, i) mod target for an exact integer x >= 0.
ResidueInt binomial_eval(const BigInt& x, std::uint64_t i, const Modulus& target);
/// C(x, i) mod target where x is only known modulo its own modulus; that
/// precision must reach target.exponent() + ord_p(i!).
ResidueInt binomial_eval(const ResidueInt& lifted_x, std::uint64_t i, const Modulus& target);

/// (x)_i = x (x-1) ... (x-i+1) mod p^k.
ResidueInt falling_factorial(const ResidueInt& x, std::uint64_t i);

ResidueInt mod_inverse(const ResidueInt& u);

/// u^e for a 1-unit u (u = 1 mod p). e is an exponent residue mod p^k; the
/// result is well defined because u^(p^k) = 1 mod p^k.
ResidueInt unit_pow(const ResidueInt& u, const ResidueInt& e);

std::uint64_t lucas_binomial_mod_p(const BigInt& a, const BigInt& b, std::uint64_t p);

/// Non-negative representative of a mod m.
BigInt mod_floor(const BigInt& a, const BigInt& m);
/// Inverse of a modulo m (gcd must be 1).
BigInt inverse_mod(const BigInt& a, const BigInt& m);

}  // namespace pf
