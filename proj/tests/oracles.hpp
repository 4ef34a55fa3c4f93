#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's evaluators or checkers.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using u64 = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline u64 pow_u64(u64 b, unsigned e) {
  u64 r = 1;
  while (e--) r *= b;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Inverse by exhaustive scan; fine for the small moduli used in tests.
inline std::optional<u64> inverse_scan(u64 a, u64 m) {
  for (u64 v = 0; v < m; ++v) {
    if (mulmod(a % m, v, m) == 1 % m) return v;
  }
  return std::nullopt;
}

inline std::optional<unsigned> ord(BigInt n, u64 p) {
  if (n == 0) return std::nullopt;
  if (n < 0) n = -n;
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Exact value of sum c_i x^i.
inline Rational eval_monomial(const std::vector<Rational>& c, long x) {
  Rational acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Exact value of sum c_i (x)_i.
inline Rational eval_falling(const std::vector<Rational>& c, long x) {
  Rational acc = 0;
  Rational ff = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    acc += c[i] * ff;
    ff *= Rational(x - static_cast<long>(i));
  }
  return acc;
}

// q mod m for a rational whose denominator is coprime to m; nullopt otherwise.
inline std::optional<u64> reduce(const Rational& q, u64 m) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const BigInt g = boost::multiprecision::gcd(den, BigInt(m));
  if (g != 1) return std::nullopt;
  BigInt dm = den % m;
  // den^-1 mod m by extended Euclid on BigInt
  BigInt a = dm, b = m, x0 = 1, x1 = 0;
  while (b != 0) {
    BigInt q2 = a / b;
    BigInt t = a - q2 * b;
    a = b;
    b = t;
    t = x0 - q2 * x1;
    x0 = x1;
    x1 = t;
  }
  BigInt r = (num % m) * (x0 % m) % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// Table of f(x) mod m for x in [0, m); nullopt if some value is not p-integral.
inline std::optional<std::vector<u64>> table(const std::function<Rational(long)>& f, u64 m) {
  std::vector<u64> t(m);
  for (u64 x = 0; x < m; ++x) {
    auto r = reduce(f(static_cast<long>(x)), m);
    if (!r) return std::nullopt;
    t[x] = *r;
  }
  return t;
}

inline bool bijective(const std::vector<u64>& t) {
  std::vector<bool> hit(t.size(), false);
  for (u64 v : t) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

inline u64 orbit_length(const std::vector<u64>& t, u64 seed = 0) {
  u64 x = seed;
  for (u64 n = 1; n <= t.size(); ++n) {
    x = t[x];
    if (x == seed) return n;
  }
  return 0;
}

inline bool transitive(const std::vector<u64>& t) { return orbit_length(t) == t.size(); }

// f(x) = f(y) mod p^j whenever x = y mod p^j, for all j < k.
inline bool compatible(const std::vector<u64>& t, u64 p) {
  const u64 m = t.size();
  for (u64 pj = p; pj < m; pj *= p) {
    for (u64 x = 0; x < m; ++x) {
      if (t[x] % pj != t[x % pj] % pj) return false;
    }
  }
  return true;
}

// Least d dividing n with s[i] = s[i + d mod n].
inline u64 period(const std::vector<u64>& s) {
  const u64 n = s.size();
  for (u64 d = 1; d <= n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (u64 i = 0; i < n && ok; ++i) ok = s[i] == s[(i + d) % n];
    if (ok) return d;
  }
  return n;
}

}  // namespace oracle
