#pragma once

// Diagnostics for one period of a sequence over Z/p^k: affine linear
// complexity, bit-plane periods and the growth of complexity with k.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padicforge/certify.hpp"
#include "padicforge/expr.hpp"
#include "padicforge/generator.hpp"
#include "padicforge/padic.hpp"

namespace pf {

inline constexpr unsigned kDefaultRMax = 32;
inline constexpr std::uint64_t kMaxSequenceLength = std::uint64_t{1} << 20;

/// kMonic:  x_{n+r} = c + sum_{j<r} c_j x_{n+j}
/// kUnit:   c + sum_{j<=r} c_j x_{n+j} = 0 with some c_j a unit
/// kAny:    c + sum_{j<=r} c_j x_{n+j} = 0 with (c, c_j) not all zero
enum class RelationFlavor { kMonic, kUnit, kAny };
std::string_view relation_flavor_name(RelationFlavor f) noexcept;

struct ComplexityResult {
  RelationFlavor flavor = RelationFlavor::kMonic;
  unsigned r_max = kDefaultRMax;
  /// Least order with a relation; nullopt means none found up to r_max.
  std::optional<unsigned> order;
  /// (c, c_0, ..., c_{r-1}) for kMonic, (c, c_0, ..., c_r) otherwise.
  std::vector<std::uint64_t> relation;

  std::string to_json() const;
};

/// Least r in [1, r_max] such that the relation holds at every cyclic index
/// of `seq` modulo m. Throws EMPTY_SEQUENCE, CAP_EXCEEDED above 2^20 terms.
ComplexityResult affine_linear_complexity(std::span<const std::uint64_t> seq, const Modulus& m,
                                          unsigned r_max = kDefaultRMax,
                                          RelationFlavor flavor = RelationFlavor::kMonic);

/// Checks a relation in the layout of ComplexityResult::relation.
bool relation_holds(std::span<const std::uint64_t> seq, const Modulus& m, std::span<const std::uint64_t> relation,
                    RelationFlavor flavor);

/// Least d dividing seq.size() with seq[i] = seq[(i + d) mod n] for all i.
std::uint64_t cyclic_period(std::span<const std::uint64_t> seq);

/// Minimal period of bit j of the sequence, j = 0..k-1. Requires p = 2.
std::vector<std::uint64_t> bit_plane_periods(std::span<const std::uint64_t> seq, const Modulus& m);

struct SequenceReport {
  Modulus modulus{2, 1};
  std::uint64_t length = 0;
  std::uint64_t period = 0;
  unsigned r_max = kDefaultRMax;
  ComplexityResult monic;
  ComplexityResult unit;
  ComplexityResult any;
  std::vector<std::uint64_t> bit_periods;  // p = 2 only
  /// Every residue mod p^k occurs equally often in the sequence.
  bool census_ok = false;

  std::optional<unsigned> linear_complexity() const { return monic.order; }
  std::string to_json() const;
};

SequenceReport analyze_sequence(std::span<const std::uint64_t> seq, const Modulus& m, unsigned r_max = kDefaultRMax);

/// modulus.value successive outputs of the generator. The output modulus
/// must be a single prime power.
std::vector<std::uint64_t> generator_sequence(const GeneratorSpec& spec, const Limits& limits = Limits::from_env());
SequenceReport analyze_generator(const GeneratorSpec& spec, unsigned r_max = kDefaultRMax,
                                 const Limits& limits = Limits::from_env());

struct ProfileEntry {
  unsigned k = 0;
  ComplexityResult result;
};

/// Unit-relation complexity of the orbit of 0 under f mod p^k for each k in
/// [k_lo, k_hi]. f must be transitive at each k (UNCERTIFIED_GENERATOR).
std::vector<ProfileEntry> complexity_growth_profile(const FnExpr& f, std::uint64_t p, unsigned k_lo, unsigned k_hi,
                                                    unsigned r_max = kDefaultRMax,
                                                    const Limits& limits = Limits::from_env());
std::string profile_to_json(std::uint64_t p, const std::vector<ProfileEntry>& profile);

}  // namespace pf
