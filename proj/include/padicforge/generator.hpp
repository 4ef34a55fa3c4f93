#pragma once

// Streaming generator x_{n+1} = f(x_n) mod m with an optional output
// function, iterated per CRT component.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicforge/certify.hpp"
#include "padicforge/expr.hpp"
#include "padicforge/padic.hpp"

namespace pf {

struct GeneratorSpec {
  FnExpr state_fn = FnExpr::var();
  std::optional<FnExpr> out_fn;
  CompositeModulus modulus = CompositeModulus::of(Modulus(2, 8));
  /// Output modulus N (must divide the state modulus); defaults to the state modulus.
  std::optional<CompositeModulus> output_modulus;
  BigInt seed = 0;
  /// Skip certification of state_fn (and out_fn).
  bool unchecked = false;

  const CompositeModulus& out_modulus() const { return output_modulus ? *output_modulus : modulus; }

  /// {"modulus": {"p","k"} | {"m"}, "seed", "state_fn": AST or DSL text,
  ///  "out_fn"?, "output_modulus"?, "unchecked"?}
  static GeneratorSpec from_json(const std::string& text);
  std::string to_json() const;
};

/// Checks the spec invariants and, unless unchecked, that state_fn is
/// certified ergodic at every prime of the modulus and out_fn is compatible
/// and bijective modulo every output factor. Throws UNCERTIFIED_GENERATOR.
void validate_spec(const GeneratorSpec& spec, const Limits& limits = Limits::from_env());

class Generator {
 public:
  explicit Generator(GeneratorSpec spec, const Limits& limits = Limits::from_env());

  const GeneratorSpec& spec() const noexcept { return spec_; }
  /// Current state, recombined by CRT.
  BigInt state() const;
  std::uint64_t steps() const noexcept { return steps_; }

  /// Advance one step and return the output of the new state.
  BigInt next();
  /// Same as next() when the output modulus fits 64 bits.
  std::uint64_t next_word();

  /// floor(t / 8) for an output modulus 2^t with t >= 8.
  unsigned bytes_per_word() const;
  /// `count` output words as little-endian bytes.
  std::vector<std::uint8_t> emit_bytes(std::uint64_t count);

 private:
  BigInt output_of_state() const;

  GeneratorSpec spec_;
  std::vector<CompiledFn> step_;
  std::vector<std::optional<CompiledFn>> out_;  // per state factor
  std::vector<int> out_factor_;                 // state factor feeding each output factor
  std::vector<BigInt> state_;
  std::uint64_t steps_ = 0;
};

struct CensusReport {
  BigInt modulus;
  BigInt output_modulus;
  std::uint64_t steps = 0;
  std::uint64_t period = 0;
  std::uint64_t preperiod = 0;
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  std::uint64_t distinct = 0;
  bool uniform = false;
  std::vector<std::uint64_t> counts;  // per output residue

  std::string to_json() const;
};

/// Runs modulus.value steps from the seed; counts outputs and finds the
/// period of the seed's orbit.
CensusReport full_period_census(const GeneratorSpec& spec, const Limits& limits = Limits::from_env());

}  // namespace pf
