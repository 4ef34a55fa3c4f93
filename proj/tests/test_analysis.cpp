#include <random>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "padicforge/analysis.hpp"
#include "padicforge/dsl.hpp"

using namespace pf;

namespace {

using u64 = std::uint64_t;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInvalidArgument;
}

std::vector<u64> orbit(const std::function<u64(u64)>& f, u64 seed, u64 n) {
  std::vector<u64> s;
  u64 x = seed;
  for (u64 i = 0; i < n; ++i) {
    s.push_back(x);
    x = f(x);
  }
  return s;
}

// Least r <= 2 with a monic affine relation, by enumerating every coefficient vector.
std::optional<unsigned> brute_monic(const std::vector<u64>& s, u64 m) {
  const u64 n = s.size();
  for (unsigned r = 1; r <= 2; ++r) {
    const u64 combos = oracle::pow_u64(m, r + 1);
    for (u64 code = 0; code < combos; ++code) {
      std::vector<u64> c(r + 1);
      u64 t = code;
      for (auto& v : c) {
        v = t % m;
        t /= m;
      }
      bool ok = true;
      for (u64 i = 0; i < n && ok; ++i) {
        u64 acc = c[0];
        for (unsigned j = 0; j < r; ++j) acc = (acc + c[j + 1] * s[(i + j) % n]) % m;
        ok = acc == s[(i + r) % n];
      }
      if (ok) return r;
    }
  }
  return std::nullopt;
}

// Least r <= 1 with c + c_0 x_n + c_1 x_{n+1} = 0, some c_j a unit (unit) or not all zero (any).
std::optional<unsigned> brute_general(const std::vector<u64>& s, u64 m, u64 p, bool unit) {
  const u64 n = s.size();
  for (unsigned r = 1; r <= 1; ++r) {
    const u64 combos = oracle::pow_u64(m, r + 2);
    for (u64 code = 1; code < combos; ++code) {
      std::vector<u64> c(r + 2);
      u64 t = code;
      for (auto& v : c) {
        v = t % m;
        t /= m;
      }
      bool has_unit = false;
      for (unsigned j = 1; j < c.size(); ++j) has_unit = has_unit || c[j] % p != 0;
      if (unit && !has_unit) continue;
      bool ok = true;
      for (u64 i = 0; i < n && ok; ++i) {
        u64 acc = c[0];
        for (unsigned j = 0; j <= r; ++j) acc = (acc + c[j + 1] * s[(i + j) % n]) % m;
        ok = acc == 0;
      }
      if (ok) return r;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("linear generators") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned k = 3 + static_cast<unsigned>(rng() % 8);
    const u64 m = u64{1} << k;
    const u64 a = (rng() % m) | 1;
    const u64 b = ((rng() % m) & ~u64{3}) | 1;
    const auto s = orbit([&](u64 x) { return (a + b * x) % m; }, 0, m);
    const Modulus mod(2, k);
    const auto r = affine_linear_complexity(s, mod, 8);
    REQUIRE(r.order.has_value());
    CHECK(*r.order == 1);
    CHECK(r.relation == std::vector<u64>{a, b});
    // The paper's homogeneous order-2 relation also holds.
    const std::vector<u64> two{0, (m - b) % m, (1 + b) % m};
    CHECK(relation_holds(s, mod, two, RelationFlavor::kMonic));
  }
}

TEST_CASE("constant and small sequences") {
  const std::vector<u64> c(16, 5);
  const auto r = affine_linear_complexity(c, Modulus(2, 4), 4);
  REQUIRE(r.order.has_value());
  CHECK(*r.order == 1);
  CHECK(relation_holds(c, Modulus(2, 4), r.relation, RelationFlavor::kMonic));
  CHECK(bit_plane_periods(c, Modulus(2, 4)) == std::vector<u64>{1, 1, 1, 1});
  CHECK(code_of([] { affine_linear_complexity(std::vector<u64>{}, Modulus(2, 4)); }) == ErrorCode::kEmptySequence);
  CHECK(code_of([] { bit_plane_periods(std::vector<u64>{1, 2}, Modulus(3, 2)); }) == ErrorCode::kNotBinaryModulus);
  CHECK(code_of([] { affine_linear_complexity(std::vector<u64>{1, 20}, Modulus(2, 4)); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("solver against exhaustive search") {
  std::mt19937_64 rng(3);
  for (u64 p : {2, 3}) {
    for (unsigned k = 1; k <= (p == 2 ? 3u : 2u); ++k) {
      const u64 m = oracle::pow_u64(p, k);
      for (int trial = 0; trial < 40; ++trial) {
        const u64 n = 1 + rng() % 9;
        std::vector<u64> s(n);
        for (auto& v : s) v = rng() % m;
        // Mix in structured sequences now and then.
        if (trial % 4 == 0) {
          for (u64 i = 0; i < n; ++i) s[i] = (3 * i + 1) % m;
        }
        const Modulus mod(p, k);
        const auto monic = affine_linear_complexity(s, mod, 2, RelationFlavor::kMonic);
        CHECK(monic.order == brute_monic(s, m));
        if (monic.order) CHECK(relation_holds(s, mod, monic.relation, RelationFlavor::kMonic));
        const auto unit = affine_linear_complexity(s, mod, 1, RelationFlavor::kUnit);
        CHECK(unit.order == brute_general(s, m, p, true));
        if (unit.order) CHECK(relation_holds(s, mod, unit.relation, RelationFlavor::kUnit));
        const auto any = affine_linear_complexity(s, mod, 1, RelationFlavor::kAny);
        CHECK(any.order == brute_general(s, m, p, false));
        if (any.order) CHECK(relation_holds(s, mod, any.relation, RelationFlavor::kAny));
      }
    }
  }
}

TEST_CASE("sign-function generator") {
  // 1 + x + 4(-1)^(1+x) satisfies x_{n+2} = x_n + 2 at every k.
  for (unsigned k = 3; k <= 12; ++k) {
    const u64 m = u64{1} << k;
    const auto s = orbit([&](u64 x) { return (1 + x + (x % 2 == 0 ? m - 4 : 4)) % m; }, 0, m);
    CHECK(oracle::period(s) == m);
    const Modulus mod(2, k);
    CHECK(relation_holds(s, mod, std::vector<u64>{2, 1, 0}, RelationFlavor::kMonic));
    const auto r = affine_linear_complexity(s, mod, 4);
    REQUIRE(r.order.has_value());
    CHECK(*r.order <= 2);
  }
}

TEST_CASE("bit planes") {
  for (unsigned k = 1; k <= 14; ++k) {
    const u64 m = u64{1} << k;
    const auto s = orbit([&](u64 x) { return (1 + 3 * x + 2 * x * x) % m; }, 0, m);
    CHECK(oracle::period(s) == m);
    const auto bp = bit_plane_periods(s, Modulus(2, k));
    REQUIRE(bp.size() == k);
    for (unsigned j = 0; j < k; ++j) {
      std::vector<u64> bit(m);
      for (u64 i = 0; i < m; ++i) bit[i] = (s[i] >> j) & 1;
      CHECK(bp[j] == oracle::period(bit));
      CHECK(bp[j] == u64{2} << j);
    }
  }
}

TEST_CASE("reports and profiles") {
  const u64 m = 256;
  const auto s = orbit([&](u64 x) { return (3 + 5 * x) % m; }, 0, m);
  const auto rep = analyze_sequence(s, Modulus(2, 8), 8);
  CHECK(rep.period == 256);
  CHECK(rep.census_ok);
  CHECK(rep.linear_complexity() == 1u);
  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j.at("period") == 256);

  const auto lin = complexity_growth_profile(parse_dsl("3 + 5*x"), 2, 3, 10, 8);
  REQUIRE(lin.size() == 8);
  for (const auto& e : lin) CHECK(e.result.order.value_or(99) <= 2);

  const auto quad = complexity_growth_profile(parse_dsl("1 + 3*x + 2*x^2"), 2, 3, 10, 16);
  for (std::size_t i = 1; i < quad.size(); ++i) {
    const unsigned prev = quad[i - 1].result.order.value_or(17);
    const unsigned now = quad[i].result.order.value_or(17);
    CHECK(now >= prev);
  }
  CHECK(quad.back().result.order.value_or(17) > quad.front().result.order.value_or(17));
  // Reduction consistency on the last two levels.
  const auto top = generator_sequence([] {
    GeneratorSpec g;
    g.state_fn = parse_dsl("1 + 3*x + 2*x^2");
    g.modulus = CompositeModulus::of(Modulus(2, 9));
    return g;
  }());
  std::vector<u64> reduced(256);
  for (u64 i = 0; i < 256; ++i) reduced[i] = top[i] % 256;
  const auto hi = affine_linear_complexity(top, Modulus(2, 9), 16, RelationFlavor::kUnit);
  const auto lo = affine_linear_complexity(reduced, Modulus(2, 8), 16, RelationFlavor::kUnit);
  CHECK(lo.order.value_or(17) <= hi.order.value_or(17));

  CHECK(code_of([] { complexity_growth_profile(parse_dsl("x^2"), 2, 2, 4); }) == ErrorCode::kUncertifiedGenerator);
  const auto pj = nlohmann::json::parse(profile_to_json(2, lin));
  CHECK(pj.is_object());
}
