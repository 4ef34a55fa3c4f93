#include "padicforge/padic.hpp"

#include <algorithm>

namespace pf {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kNotPrime: return "NOT_PRIME";
    case ErrorCode::kMixedModuli: return "MIXED_MODULI";
    case ErrorCode::kPrecisionShortfall: return "PRECISION_SHORTFALL";
    case ErrorCode::kNotAUnit: return "NOT_A_UNIT";
    case ErrorCode::kBaseNotOneUnit: return "BASE_NOT_ONE_UNIT";
    case ErrorCode::kNotIntegerValued: return "NOT_INTEGER_VALUED";
    case ErrorCode::kWrongPrime: return "WRONG_PRIME";
    case ErrorCode::kDegreeCapExceeded: return "DEGREE_CAP_EXCEEDED";
    case ErrorCode::kBitwiseOddPrime: return "BITWISE_ODD_PRIME";
    case ErrorCode::kCDivisibleByP: return "C_DIVISIBLE_BY_P";
    case ErrorCode::kNotClassB: return "NOT_CLASS_B";
    case ErrorCode::kNotClassA: return "NOT_CLASS_A";
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kSyntaxError: return "SYNTAX_ERROR";
    case ErrorCode::kUnknownIdentifier: return "UNKNOWN_IDENTIFIER";
    case ErrorCode::kCapExceeded: return "CAP_EXCEEDED";
    case ErrorCode::kNotBijective: return "NOT_BIJECTIVE";
    case ErrorCode::kNotBinaryModulus: return "NOT_BINARY_MODULUS";
    case ErrorCode::kEmptySequence: return "EMPTY_SEQUENCE";
    case ErrorCode::kUncertifiedGenerator: return "UNCERTIFIED_GENERATOR";
    case ErrorCode::kIoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

BigInt pow_big(std::uint64_t base, unsigned exponent) {
  return boost::multiprecision::pow(BigInt(base), exponent);
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod_floor(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) fail(ErrorCode::kNotAUnit, "value is not invertible modulo " + m.str());
  return mod_floor(old_s, m);
}

// --- Modulus -----------------------------------------------------------------

Modulus::Modulus(std::uint64_t p, unsigned k) : p_(p), k_(k) {
  if (!is_prime(p)) fail(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
  if (k == 0) fail(ErrorCode::kInvalidArgument, "modulus exponent must be positive");
  value_ = pow_big(p, k);
}

std::uint64_t Modulus::word() const {
  if (!fits_word()) fail(ErrorCode::kInvalidArgument, to_string() + " does not fit a machine word");
  return static_cast<std::uint64_t>(value_);
}

std::string Modulus::to_string() const { return std::to_string(p_) + "^" + std::to_string(k_); }

// --- ResidueInt --------------------------------------------------------------

ResidueInt::ResidueInt(BigInt value, Modulus modulus)
    : residue_(mod_floor(value, modulus.value())), modulus_(std::move(modulus)) {}

void ResidueInt::require_same(const ResidueInt& o) const {
  if (!(modulus_ == o.modulus_)) {
    fail(ErrorCode::kMixedModuli,
         "mixed moduli " + modulus_.to_string() + " and " + o.modulus_.to_string());
  }
}

ResidueInt ResidueInt::operator+(const ResidueInt& o) const {
  require_same(o);
  return ResidueInt(residue_ + o.residue_, modulus_);
}

ResidueInt ResidueInt::operator-(const ResidueInt& o) const {
  require_same(o);
  return ResidueInt(residue_ - o.residue_, modulus_);
}

ResidueInt ResidueInt::operator*(const ResidueInt& o) const {
  require_same(o);
  return ResidueInt(residue_ * o.residue_, modulus_);
}

ResidueInt ResidueInt::operator-() const { return ResidueInt(-residue_, modulus_); }

ResidueInt ResidueInt::reduce(unsigned j) const {
  if (j > modulus_.exponent()) {
    fail(ErrorCode::kPrecisionShortfall, "cannot reduce " + modulus_.to_string() + " residue to a higher exponent");
  }
  Modulus target = modulus_.with_exponent(j);
  return ResidueInt(residue_, target);
}

bool ResidueInt::is_unit() const { return residue_ % modulus_.prime() != 0; }

// --- CompositeModulus --------------------------------------------------------

CompositeModulus::CompositeModulus(std::vector<Modulus> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorCode::kInvalidArgument, "composite modulus needs at least one factor");
  value_ = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0 && factors_[i].prime() <= factors_[i - 1].prime()) {
      fail(ErrorCode::kInvalidArgument, "composite modulus primes must be strictly increasing");
    }
    value_ *= factors_[i].value();
  }
}

CompositeModulus CompositeModulus::factor(const BigInt& m) {
  if (m < 2) fail(ErrorCode::kInvalidArgument, "modulus must be at least 2");
  std::vector<Modulus> out;
  BigInt rest = m;
  for (std::uint64_t d = 2; BigInt(d) * d <= rest; d += (d == 2 ? 1 : 2)) {
    if (d > (std::uint64_t{1} << 32)) {
      fail(ErrorCode::kInvalidArgument, "modulus has no factor below 2^32 and is not a small prime");
    }
    unsigned k = 0;
    while (rest % d == 0) {
      rest /= d;
      ++k;
    }
    if (k > 0) out.emplace_back(d, k);
  }
  if (rest > 1) {
    if (rest >= (BigInt(1) << 64)) fail(ErrorCode::kInvalidArgument, "remaining cofactor too large to factor");
    out.emplace_back(static_cast<std::uint64_t>(rest), 1);
  }
  return CompositeModulus(std::move(out));
}

BigInt CompositeModulus::radical() const {
  BigInt r = 1;
  for (const auto& f : factors_) r *= f.prime();
  return r;
}

std::vector<BigInt> CompositeModulus::decompose(const BigInt& x) const {
  std::vector<BigInt> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(mod_floor(x, f.value()));
  return out;
}

BigInt CompositeModulus::combine(const std::vector<BigInt>& residues) const {
  if (residues.size() != factors_.size()) fail(ErrorCode::kLengthMismatch, "CRT component count mismatch");
  BigInt acc = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const BigInt& mi = factors_[i].value();
    BigInt rest = value_ / mi;
    acc += residues[i] * rest * inverse_mod(rest, mi);
  }
  return mod_floor(acc, value_);
}

std::string CompositeModulus::to_string() const {
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += "*";
    s += f.to_string();
  }
  return s;
}

// --- valuations and digits ---------------------------------------------------

std::optional<unsigned> ord_p(const BigInt& n, std::uint64_t p) {
  if (n == 0) return std::nullopt;
  BigInt v = n < 0 ? BigInt(-n) : n;
  unsigned e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

unsigned ord_p_factorial(std::uint64_t i, std::uint64_t p) {
  unsigned e = 0;
  for (std::uint64_t q = i / p; q > 0; q /= p) e += static_cast<unsigned>(q);
  return e;
}

unsigned floor_log(std::uint64_t i, std::uint64_t p) {
  if (i == 0) fail(ErrorCode::kInvalidArgument, "floor_log of zero");
  unsigned e = 0;
  while (i >= p) {
    i /= p;
    ++e;
  }
  return e;
}

std::vector<std::uint64_t> digits(const ResidueInt& x) {
  std::vector<std::uint64_t> out;
  out.reserve(x.modulus().exponent());
  BigInt v = x.residue();
  const std::uint64_t p = x.modulus().prime();
  for (unsigned i = 0; i < x.modulus().exponent(); ++i) {
    out.push_back(static_cast<std::uint64_t>(v % p));
    v /= p;
  }
  return out;
}

// --- binomials ---------------------------------------------------------------

namespace {

// Product (x)(x-1)...(x-i+1) with the p-part of each factor split off:
// returns the unit part modulo `mod` and the total p-valuation, or nullopt
// when one factor is zero.
struct SplitProduct {
  BigInt unit;
  unsigned valuation;
};

std::optional<SplitProduct> split_falling(const BigInt& x, std::uint64_t i, std::uint64_t p, const BigInt& mod) {
  SplitProduct acc{BigInt(1) % mod, 0};
  for (std::uint64_t j = 0; j < i; ++j) {
    BigInt f = x - j;
    if (f == 0) return std::nullopt;
    while (f % p == 0) {
      f /= p;
      ++acc.valuation;
    }
    acc.unit = mod_floor(acc.unit * f, mod);
  }
  return acc;
}

}  // namespace

ResidueInt binomial_eval(const BigInt& x, std::uint64_t i, const Modulus& target) {
  if (x < 0) fail(ErrorCode::kInvalidArgument, "binomial_eval expects a non-negative integer");
  if (i == 0) return ResidueInt(1, target);
  if (x < i) return ResidueInt(0, target);
  const std::uint64_t p = target.prime();
  // C(x, i) = (x)_i / i!; numerator and denominator split into unit and p parts.
  auto num = split_falling(x, i, p, target.value());
  auto den = split_falling(BigInt(i), i, p, target.value());
  const unsigned v = num->valuation - den->valuation;
  if (v >= target.exponent()) return ResidueInt(0, target);
  BigInt value = num->unit * inverse_mod(den->unit, target.value()) * pow_big(p, v);
  return ResidueInt(value, target);
}

ResidueInt binomial_eval(const ResidueInt& lifted_x, std::uint64_t i, const Modulus& target) {
  if (lifted_x.modulus().prime() != target.prime()) {
    fail(ErrorCode::kMixedModuli, "binomial_eval: lift and target use different primes");
  }
  const unsigned need = target.exponent() + ord_p_factorial(i, target.prime());
  if (lifted_x.modulus().exponent() < need) {
    fail(ErrorCode::kPrecisionShortfall,
         "binomial_eval needs x modulo " + std::to_string(target.prime()) + "^" + std::to_string(need) +
             ", got " + lifted_x.modulus().to_string());
  }
  return binomial_eval(lifted_x.residue(), i, target);
}

ResidueInt falling_factorial(const ResidueInt& x, std::uint64_t i) {
  const BigInt& m = x.modulus().value();
  BigInt acc = BigInt(1) % m;
  for (std::uint64_t j = 0; j < i && acc != 0; ++j) acc = mod_floor(acc * (x.residue() - j), m);
  return ResidueInt(acc, x.modulus());
}

ResidueInt mod_inverse(const ResidueInt& u) {
  if (!u.is_unit()) {
    fail(ErrorCode::kNotAUnit, u.residue().str() + " is not a unit modulo " + u.modulus().to_string());
  }
  return ResidueInt(inverse_mod(u.residue(), u.modulus().value()), u.modulus());
}

ResidueInt unit_pow(const ResidueInt& u, const ResidueInt& e) {
  if (!(u.modulus() == e.modulus())) {
    fail(ErrorCode::kMixedModuli, "unit_pow: base and exponent residues must share a modulus");
  }
  if (u.residue() % u.modulus().prime() != 1 % u.modulus().prime()) {
    fail(ErrorCode::kBaseNotOneUnit, u.residue().str() + " is not 1 mod " + std::to_string(u.modulus().prime()));
  }
  return ResidueInt(boost::multiprecision::powm(u.residue(), e.residue(), u.modulus().value()), u.modulus());
}

std::uint64_t lucas_binomial_mod_p(const BigInt& a, const BigInt& b, std::uint64_t p) {
  if (a < 0 || b < 0) fail(ErrorCode::kInvalidArgument, "lucas_binomial_mod_p expects naturals");
  BigInt x = a, y = b;
  std::uint64_t acc = 1;
  while ((x > 0 || y > 0) && acc != 0) {
    const auto ad = static_cast<std::uint64_t>(x % p);
    const auto bd = static_cast<std::uint64_t>(y % p);
    x /= p;
    y /= p;
    if (bd > ad) return 0;
    // C(ad, bd) mod p with small digits: multiplicative formula in Z/p.
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t j = 0; j < bd; ++j) {
      num = static_cast<std::uint64_t>((static_cast<unsigned __int128>(num) * (ad - j)) % p);
      den = static_cast<std::uint64_t>((static_cast<unsigned __int128>(den) * (j + 1)) % p);
    }
    const auto inv = static_cast<std::uint64_t>(inverse_mod(BigInt(den), BigInt(p)));
    acc = static_cast<std::uint64_t>((static_cast<unsigned __int128>(acc) * num % p) * inv % p);
  }
  return acc % p;
}

}  // namespace pf
