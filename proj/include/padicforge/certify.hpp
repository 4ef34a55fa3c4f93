#pragma once

// Exhaustive checkers over Z/p^k and the certificates that lift a finite
// check to a statement about every k.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padicforge/expr.hpp"
#include "padicforge/mahler.hpp"
#include "padicforge/padic.hpp"

namespace pf {

struct Limits {
  std::uint64_t cap_states = std::uint64_t{1} << 24;  // orbit walks, bijectivity
  std::uint64_t cap_inputs = std::uint64_t{1} << 20;  // fiber censuses

  /// Defaults, with PADIC_FORGE_CAP (if set) replacing cap_states.
  static Limits from_env();
};

using WordMap = std::function<std::uint64_t(std::uint64_t)>;

/// f as a function on residues mod m (64-bit representatives).
WordMap word_map(const FnExpr& f, const Modulus& m);
/// The polynomial sum a_i C(x, i) as an expression.
FnExpr series_expr(const MahlerSeries& s);

struct BijectiveResult {
  bool bijective = false;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> collision;
};

enum class OrbitStatus { kTransitive, kShortCycle, kNotBijective };
std::string_view orbit_status_name(OrbitStatus s) noexcept;

struct TransitiveResult {
  bool transitive = false;
  OrbitStatus status = OrbitStatus::kShortCycle;
  /// Steps until the orbit of 0 returned to 0 (or re-entered itself).
  std::uint64_t orbit_length = 0;
};

struct CompatibleResult {
  bool compatible = false;
  std::optional<std::pair<std::uint64_t, unsigned>> witness;  // (x, j): f(x) != f(x mod p^j) mod p^j
};

BijectiveResult bijective_mod(const WordMap& f, const Modulus& m, const Limits& limits = Limits::from_env());
BijectiveResult bijective_mod(const FnExpr& f, const Modulus& m, const Limits& limits = Limits::from_env());
BijectiveResult bijective_mod(const MahlerSeries& f, const Modulus& m, const Limits& limits = Limits::from_env());

TransitiveResult transitive_mod(const WordMap& f, const Modulus& m, const Limits& limits = Limits::from_env());
TransitiveResult transitive_mod(const FnExpr& f, const Modulus& m, const Limits& limits = Limits::from_env());
TransitiveResult transitive_mod(const MahlerSeries& f, const Modulus& m, const Limits& limits = Limits::from_env());

CompatibleResult compatible_mod(const WordMap& f, const Modulus& m, const Limits& limits = Limits::from_env());
CompatibleResult compatible_mod(const FnExpr& f, const Modulus& m, const Limits& limits = Limits::from_env());

// --- multivariate polynomials ------------------------------------------------

/// Integer polynomial in `arity` variables.
struct MultiPoly {
  struct Term {
    BigInt coeff;
    std::vector<unsigned> exponents;  // one per variable
  };
  unsigned arity = 1;
  std::vector<Term> terms;

  MultiPoly& add_term(BigInt coeff, std::vector<unsigned> exponents);
  std::uint64_t eval_word(const std::vector<std::uint64_t>& x, std::uint64_t m) const;
  MultiPoly partial(unsigned var) const;
  std::string to_string() const;
};

struct EquiprobableResult {
  bool equiprobable = false;
  std::uint64_t expected_fiber = 0;
  std::uint64_t fiber_min = 0;
  std::uint64_t fiber_max = 0;
  /// Output point with the smallest fiber when not equiprobable.
  std::optional<std::vector<std::uint64_t>> witness;
};

/// F: (Z/p^k)^n_in -> (Z/p^k)^F.size(), full fiber census.
EquiprobableResult equiprobable_mod(const std::vector<MultiPoly>& F, unsigned n_in, const Modulus& m,
                                    const Limits& limits = Limits::from_env());

// --- certificates ------------------------------------------------------------

enum class Property { kCompatible, kMeasurePreserving, kErgodic, kEquiprobable };
enum class Verdict { kProven, kRefuted, kUnknown };

/// The finite criterion a certificate rests on.
enum class Rule {
  kMahlerCompatibility,
  kMahlerMeasure2Adic,
  kMahlerErgodic2Adic,
  kMahlerErgodicOddP,
  kLinearPlusPDifference,
  kNegDifferenceForm,
  kJacobianModP,
  kBijectiveModP2,
  kTriangleOddWeight,
  kClassAThreshold,
  kPolyTransitiveThreshold,
  kPolyBijectiveThreshold,
  kClassBThreshold,
  kOnePlusXPlusP2B,
  kPrimitiveComposition,
  kBruteOnly,
};

std::string_view property_name(Property p) noexcept;
std::string_view verdict_name(Verdict v) noexcept;
std::string_view rule_name(Rule r) noexcept;

struct Certificate {
  Property property = Property::kErgodic;
  Verdict verdict = Verdict::kUnknown;
  Rule rule = Rule::kBruteOnly;
  Modulus checked_modulus{2, 1};
  std::string witness_json;  // empty when absent
  double elapsed_ms = 0;
  std::string note;

  std::string to_json() const;
};

enum class ClassTag { kZPoly, kQpPolyIntval, kClassA, kClassB, kGenericCompatible };
std::string_view class_tag_name(ClassTag t) noexcept;

struct FunctionClass {
  ClassTag tag = ClassTag::kGenericCompatible;
  std::size_t degree = 0;
  unsigned rho = 0;
  unsigned lambda = 1;
};

/// Best class recognisable from the expression.
FunctionClass infer_class(const FnExpr& e, std::uint64_t p);

/// Modulus exponent at which the class threshold check runs, or nullopt when
/// the class has no threshold for this property at p.
std::optional<unsigned> threshold_exponent(const FunctionClass& cls, Property property, std::uint64_t p);

/// Threshold check for ergodicity. For generic functions the brute-force
/// check runs at p^generic_k and can only refute.
Certificate ergodicity_certificate(const FnExpr& f, const FunctionClass& cls, std::uint64_t p, unsigned generic_k = 0,
                                   const Limits& limits = Limits::from_env());
Certificate measure_preservation_certificate(const FnExpr& f, const FunctionClass& cls, std::uint64_t p,
                                             unsigned generic_k = 0, const Limits& limits = Limits::from_env());

/// Full certification pipeline: coefficient criteria and structural forms
/// first, then class thresholds, then brute force at p^generic_k.
Certificate certify(const FnExpr& f, Property property, std::uint64_t p, unsigned generic_k = 0,
                    const Limits& limits = Limits::from_env());

Certificate jacobian_equiprobable_certificate(const std::vector<MultiPoly>& F, unsigned n_in, std::uint64_t p,
                                              const Limits& limits = Limits::from_env());
Certificate polynomial_bijectivity_certificate(const std::vector<MultiPoly>& F, std::uint64_t p,
                                               const Limits& limits = Limits::from_env());
Certificate triangle_certificate(const BoolTriangle& t);

bool class_b_membership(const FnExpr& e, std::uint64_t p);

/// sum_{i=1}^{2 p^lambda} (-1)^(i-1) Delta^i f(x) / i mod p^2.
ResidueInt derivative_mod_p(const MahlerSeries& f, const ResidueInt& x, unsigned lambda);

}  // namespace pf
