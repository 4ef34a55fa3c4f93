#include "padicforge/repro.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "padicforge/analysis.hpp"
#include "padicforge/dsl.hpp"
#include "padicforge/expr.hpp"
#include "padicforge/mahler.hpp"

namespace pf {

using nlohmann::json;
using u64 = std::uint64_t;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Case {
  const char* section;
  const char* id;
  const char* claim;
  std::function<Outcome(const Limits&)> run;
};

// First k in [lo, hi] at which f is not transitive mod p^k.
std::optional<unsigned> first_non_transitive(const FnExpr& f, u64 p, unsigned lo, unsigned hi, const Limits& limits) {
  for (unsigned k = lo; k <= hi; ++k) {
    if (!transitive_mod(f, Modulus(p, k), limits).transitive) return k;
  }
  return std::nullopt;
}

Outcome transitive_over(const FnExpr& f, std::initializer_list<u64> primes, unsigned hi, const Limits& limits) {
  std::string detail;
  bool pass = true;
  for (u64 p : primes) {
    const auto bad = first_non_transitive(f, p, 1, hi, limits);
    if (!detail.empty()) detail += "; ";
    if (bad) {
      pass = false;
      detail += "not transitive mod " + Modulus(p, *bad).to_string();
    } else {
      detail += "transitive mod " + std::to_string(p) + "^k, k<=" + std::to_string(hi);
    }
  }
  return {pass, detail};
}

Outcome expect_cert(const Certificate& c, Verdict v, Rule rule, std::optional<Modulus> at = std::nullopt) {
  const bool ok = c.verdict == v && c.rule == rule && (!at || c.checked_modulus == *at);
  return {ok, std::string(verdict_name(c.verdict)) + " via " + std::string(rule_name(c.rule)) + " at " +
                  c.checked_modulus.to_string()};
}

u64 eval_word(const char* dsl, u64 x, const Modulus& m) {
  return static_cast<u64>(eval_expr(parse_dsl(dsl), ResidueInt(BigInt(x), m)).residue());
}

std::vector<u64> orbit(const FnExpr& f, const Modulus& m, u64 seed) {
  const CompiledFn step(f, m);
  std::vector<u64> seq(m.word());
  u64 x = seed;
  for (auto& s : seq) {
    s = x;
    x = step(x);
  }
  return seq;
}

MultiPoly univariate(std::initializer_list<std::pair<long, unsigned>> terms) {
  MultiPoly f;
  f.arity = 1;
  for (const auto& [c, e] : terms) f.add_term(c, {e});
  return f;
}

const FnExpr& sign_example() {
  static const FnExpr f = parse_dsl("1 + x + 4*(-1)^(1+x)");
  return f;
}

std::vector<Case> cases() {
  std::vector<Case> out;

  out.push_back({"section1", "inverse-3-mod-16", "3^-1 = 11 mod 16", [](const Limits&) -> Outcome {
                   const auto r = mod_inverse(ResidueInt(3, Modulus(2, 4)));
                   return {r.residue() == 11, "3^-1 = " + r.residue().str()};
                 }});
  out.push_back({"section1", "power-3-11-mod-16", "3^11 = 11 mod 16", [](const Limits&) -> Outcome {
                   const Modulus m(2, 4);
                   const auto r = unit_pow(ResidueInt(3, m), ResidueInt(11, m));
                   return {r.residue() == 11, "3^11 = " + r.residue().str()};
                 }});
  out.push_back({"section1", "xor-and", "1 XOR 3 = 2 AND 7 = 2 mod 8", [](const Limits&) -> Outcome {
                   const Modulus m(2, 3);
                   const u64 a = eval_word("xor(1, 3)", 0, m);
                   const u64 b = eval_word("and(2, 7)", 0, m);
                   return {a == 2 && b == 2, "1 XOR 3 = " + std::to_string(a) + ", 2 AND 7 = " + std::to_string(b)};
                 }});
  out.push_back({"section1", "neg-13", "NEG 13 = 2 mod 8", [](const Limits&) -> Outcome {
                   const u64 v = eval_word("neg(13)", 0, Modulus(2, 3));
                   return {v == 2, "NEG 13 = " + std::to_string(v)};
                 }});
  out.push_back({"section1", "xor-generator", "1+x+2 delta(x XOR (2x+1)) is transitive mod 2^k, k<=16",
                 [](const Limits& l) {
                   const FnExpr f = build_ergodic(parse_dsl("xor(x, 2*x+1)"), 1, 2);
                   return transitive_over(f, {2}, 16, l);
                 }});
  out.push_back({"section1", "lcg-relation", "x_{n+2} = (1+b) x_{n+1} - b x_n for a+bx", [](const Limits&) -> Outcome {
                   const Modulus m(2, 10);
                   const u64 a = 7;
                   const u64 b = 13;
                   const auto seq = orbit(FnExpr::poly(RationalPoly::monomial({Rational(a), Rational(b)})), m, 0);
                   const std::vector<u64> rel{0, m.word() - b, 1 + b};
                   const bool holds = relation_holds(seq, m, rel, RelationFlavor::kMonic);
                   const auto c = affine_linear_complexity(seq, m, 4);
                   return {holds && c.order && *c.order <= 2,
                           std::string(holds ? "relation holds" : "relation fails") + ", affine complexity " +
                               (c.order ? std::to_string(*c.order) : "none")};
                 }});

  out.push_back({"section2", "neg-identity", "z + NEG z = -1 mod 2^k", [](const Limits&) -> Outcome {
                   for (unsigned k = 1; k <= 10; ++k) {
                     const Modulus m(2, k);
                     for (u64 z = 0; z < m.word(); ++z) {
                       if (eval_word("x + neg(x)", z, m) != m.word() - 1) {
                         return {false, "fails at z=" + std::to_string(z) + " mod " + m.to_string()};
                       }
                     }
                   }
                   return {true, "checked every z mod 2^k, k<=10"};
                 }});
  out.push_back({"section2", "displayed-ergodic", "7+x+2 delta((x^2) XOR (x + (32 AND x))) is ergodic",
                 [](const Limits& l) -> Outcome {
                   const FnExpr f = build_ergodic(parse_dsl("xor(x^2, x + and(32, x))"), 7, 2);
                   const auto c = certify(f, Property::kErgodic, 2, 0, l);
                   const auto t = transitive_over(f, {2}, 12, l);
                   return {c.verdict == Verdict::kProven && t.pass,
                           std::string(verdict_name(c.verdict)) + " via " + std::string(rule_name(c.rule)) + "; " +
                               t.detail};
                 }});
  out.push_back({"section2", "sign-function-mahler", "1+x+4(-1)^(1+x) is compatible and ergodic by its coefficients",
                 [](const Limits&) -> Outcome {
                   std::vector<Rational> values;
                   for (int x = 0; x <= static_cast<int>(kDefaultDegreeCap); ++x) {
                     values.emplace_back(1 + x + 4 * (x % 2 == 0 ? -1 : 1));
                   }
                   const MahlerSeries s = coeffs_from_values(values, 2);
                   const bool comp = is_compatible(s);
                   const bool erg = is_ergodic_2adic(s);
                   return {comp && erg, std::string("compatible=") + (comp ? "true" : "false") +
                                            ", ergodic=" + (erg ? "true" : "false")};
                 }});

  out.push_back({"section3", "affine-theorem-a", "a+bx transitive mod 2^k iff a odd and b = 1 mod 4",
                 [](const Limits& l) -> Outcome {
                   for (unsigned k = 3; k <= 8; ++k) {
                     const Modulus m(2, k);
                     for (u64 a = 0; a < m.word(); ++a) {
                       for (u64 b = 0; b < m.word(); ++b) {
                         const u64 mw = m.word();
                         const WordMap f = [a, b, mw](u64 x) { return (a + b * x) % mw; };
                         const bool expect = a % 2 == 1 && b % 4 == 1;
                         if (transitive_mod(f, m, l).transitive != expect) {
                           return {false, "mismatch at a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                                              " mod " + m.to_string()};
                         }
                       }
                     }
                   }
                   return {true, "exhaustive for k=3..8"};
                 }});
  out.push_back({"section3", "equiprobable-2x-y3", "2x+y^3 is equiprobable mod 2^n", [](const Limits& l) -> Outcome {
                   MultiPoly f;
                   f.arity = 2;
                   f.add_term(2, {1, 0}).add_term(1, {0, 3});
                   for (unsigned n = 1; n <= 8; ++n) {
                     const auto r = equiprobable_mod({f}, 2, Modulus(2, n), l);
                     if (!r.equiprobable || r.fiber_min != (u64{1} << n)) {
                       return {false, "fibers " + std::to_string(r.fiber_min) + ".." + std::to_string(r.fiber_max) +
                                          " mod 2^" + std::to_string(n)};
                     }
                   }
                   return {true, "every fiber has 2^n points, n<=8"};
                 }});
  out.push_back({"section3", "jacobian-phi", "x+3k+6k^2+4k^3 is equiprobable by the Jacobian test",
                 [](const Limits& l) {
                   MultiPoly phi;
                   phi.arity = 2;
                   phi.add_term(1, {1, 0}).add_term(3, {0, 1}).add_term(6, {0, 2}).add_term(4, {0, 3});
                   return expect_cert(jacobian_equiprobable_certificate({phi}, 2, 2, l), Verdict::kProven,
                                      Rule::kJacobianModP);
                 }});
  out.push_back({"section3", "jacobian-2x-y3", "the Jacobian test is silent on 2x+y^3", [](const Limits& l) {
                   MultiPoly f;
                   f.arity = 2;
                   f.add_term(2, {1, 0}).add_term(1, {0, 3});
                   return expect_cert(jacobian_equiprobable_certificate({f}, 2, 2, l), Verdict::kUnknown,
                                      Rule::kJacobianModP);
                 }});

  out.push_back({"section4", "one-plus-xp-mod-p2", "1+x^p is bijective mod p, not mod p^2", [](const Limits& l) -> Outcome {
                   std::string detail;
                   bool pass = true;
                   for (u64 p : {2, 3, 5}) {
                     const FnExpr f = FnExpr::poly(RationalPoly::monomial([p] {
                       std::vector<Rational> c(p + 1, Rational(0));
                       c[0] = 1;
                       c[p] = 1;
                       return c;
                     }()));
                     const bool b1 = bijective_mod(f, Modulus(p, 1), l).bijective;
                     const bool b2 = bijective_mod(f, Modulus(p, 2), l).bijective;
                     pass = pass && b1 && !b2;
                     detail += "p=" + std::to_string(p) + ": mod p " + (b1 ? "bijective" : "not bijective") +
                               ", mod p^2 " + (b2 ? "bijective" : "not bijective") + "; ";
                   }
                   return {pass, detail};
                 }});
  out.push_back({"section4", "one-plus-xp-refuted", "the mod p^2 test refutes bijectivity of 1+x^p",
                 [](const Limits& l) -> Outcome {
                   std::string detail;
                   bool pass = true;
                   for (u64 p : {2, 3, 5}) {
                     const auto c = polynomial_bijectivity_certificate({univariate({{1, 0}, {1, static_cast<unsigned>(p)}})}, p, l);
                     pass = pass && c.verdict == Verdict::kRefuted;
                     detail += "p=" + std::to_string(p) + " " + std::string(verdict_name(c.verdict)) + "; ";
                   }
                   return {pass, detail};
                 }});
  out.push_back({"section4", "one-plus-xp-certify", "measure preservation of 1+x^p is refuted",
                 [](const Limits& l) -> Outcome {
                   std::string detail;
                   bool pass = true;
                   for (u64 p : {2, 3, 5}) {
                     const auto c = certify(parse_dsl("1 + x^" + std::to_string(p)), Property::kMeasurePreserving, p, 0, l);
                     pass = pass && c.verdict == Verdict::kRefuted;
                     detail += "p=" + std::to_string(p) + " " + std::string(verdict_name(c.verdict)) + "; ";
                   }
                   return {pass, detail};
                 }});
  out.push_back({"section4", "class-b-exponential", "(1+2x)^x lies in class B at p=2", [](const Limits&) -> Outcome {
                   const bool in = class_b_membership(parse_dsl("(1+2*x)^x"), 2);
                   return {in, in ? "member" : "not recognised"};
                 }});

  out.push_back({"section5", "quintic-10k", "1-127x-152x^3+152x^5 is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 - 127*x - 152*x^3 + 152*x^5"), {2, 5}, 6, l); }});
  out.push_back({"section5", "falling-certify", "1+x+(5/18)(x)_6 is certified ergodic at 2^5", [](const Limits& l) {
                   return expect_cert(certify(parse_dsl("1 + x + 5/18*ff(x, 6)"), Property::kErgodic, 2, 0, l),
                                      Verdict::kProven, Rule::kPolyTransitiveThreshold, Modulus(2, 5));
                 }});
  out.push_back({"section5", "falling-10k", "1+x+(5/18)(x)_6 is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 + x + 5/18*ff(x, 6)"), {2, 5}, 6, l); }});
  out.push_back({"section5", "exp201-certify", "1+x+201^x is certified ergodic at 5^2", [](const Limits& l) {
                   return expect_cert(certify(parse_dsl("1 + x + 201^x"), Property::kErgodic, 5, 0, l), Verdict::kProven,
                                      Rule::kClassBThreshold, Modulus(5, 2));
                 }});
  out.push_back({"section5", "exp201-tower-certify", "1+x+201^(201^x) is certified ergodic at 5^2", [](const Limits& l) {
                   return expect_cert(certify(parse_dsl("1 + x + 201^(201^x)"), Property::kErgodic, 5, 0, l),
                                      Verdict::kProven, Rule::kClassBThreshold, Modulus(5, 2));
                 }});
  out.push_back({"section5", "exp201-10k", "1+x+201^x is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 + x + 201^x"), {2, 5}, 6, l); }});
  out.push_back({"section5", "exp201-tower-10k", "1+x+201^(201^x) is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 + x + 201^(201^x)"), {2, 5}, 6, l); }});
  out.push_back({"section5", "inverse-10k", "1+x+(1+200x)^-1 is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 + x + inv(1 + 200*x)"), {2, 5}, 6, l); }});
  out.push_back({"section5", "composite-family-10k", "1+x+100(1+200x)^-1 from the composite family is transitive mod 10^4",
                 [](const Limits& l) -> Outcome {
                   const CompositeModulus m = CompositeModulus::factor(10000);
                   const FnExpr f = build_composite_generator(RationalPoly::monomial({1}), RationalPoly::monomial({0, 20}),
                                                              RationalPoly::monomial({-1}), m);
                   bool pass = true;
                   std::string detail;
                   for (const auto& fm : m.factors()) {
                     const bool t = transitive_mod(f, fm, l).transitive;
                     pass = pass && t;
                     detail += fm.to_string() + (t ? " transitive; " : " not transitive; ");
                   }
                   return {pass, detail};
                 }});
  out.push_back({"section5", "exp11-10k", "1+x+100*11^x is transitive mod 2^k and 5^k, k<=6",
                 [](const Limits& l) { return transitive_over(parse_dsl("1 + x + 100*11^x"), {2, 5}, 6, l); }});
  out.push_back({"section5", "sign-relation", "1+x+4(-1)^(1+x) satisfies x_{n+2} = x_n + 2", [](const Limits&) -> Outcome {
                   for (unsigned k = 1; k <= 12; ++k) {
                     const Modulus m(2, k);
                     const std::vector<u64> rel{2 % m.word(), 1 % m.word(), 0};
                     if (!relation_holds(orbit(sign_example(), m, 0), m, rel, RelationFlavor::kMonic)) {
                       return {false, "fails mod " + m.to_string()};
                     }
                   }
                   return {true, "holds mod 2^k, k<=12"};
                 }});
  out.push_back({"section5", "sign-complexity", "1+x+4(-1)^(1+x) has affine complexity 2 at every k<=12",
                 [](const Limits&) -> Outcome {
                   std::string detail;
                   bool pass = true;
                   for (unsigned k = 1; k <= 12; ++k) {
                     const Modulus m(2, k);
                     const auto c = affine_linear_complexity(orbit(sign_example(), m, 0), m, 8);
                     const unsigned order = c.order.value_or(0);
                     if (order != 2) {
                       pass = false;
                       detail += "k=" + std::to_string(k) + ": " + std::to_string(order) + "; ";
                     }
                   }
                   return {pass, pass ? "2 at every k" : detail};
                 }});
  out.push_back({"section5", "sign-profile", "unit-relation profile of 1+x+4(-1)^(1+x) is constant 2 for k=3..12",
                 [](const Limits& l) -> Outcome {
                   const auto prof = complexity_growth_profile(sign_example(), 2, 3, 12, 8, l);
                   std::string detail;
                   bool pass = true;
                   for (const auto& e : prof) {
                     const unsigned order = e.result.order.value_or(0);
                     pass = pass && order == 2;
                     detail += std::to_string(order) + " ";
                   }
                   return {pass, "profile " + detail};
                 }});
  out.push_back({"section5", "linear-profile", "unit-relation profile of 1+5x stays <= 2 for k=3..12",
                 [](const Limits& l) -> Outcome {
                   const auto prof = complexity_growth_profile(parse_dsl("1 + 5*x"), 2, 3, 12, 8, l);
                   std::string detail;
                   bool pass = true;
                   for (const auto& e : prof) {
                     pass = pass && e.result.order && *e.result.order <= 2;
                     detail += (e.result.order ? std::to_string(*e.result.order) : "none") + " ";
                   }
                   return {pass, "profile " + detail};
                 }});
  out.push_back({"section5", "low-bit-effect", "bit j of an ergodic sequence mod 2^14 has period dividing 2^(j+1)",
                 [](const Limits&) -> Outcome {
                   const Modulus m(2, 14);
                   const auto bits = bit_plane_periods(orbit(parse_dsl("1 + x + 2*x^2"), m, 0), m);
                   for (std::size_t j = 0; j < bits.size(); ++j) {
                     if ((u64{2} << j) % bits[j] != 0) return {false, "bit " + std::to_string(j) + " has period " + std::to_string(bits[j])};
                   }
                   return {bits[0] == 2, "bit 0 period " + std::to_string(bits[0])};
                 }});
  return out;
}

}  // namespace

std::vector<ReproRow> run_repro(std::string_view only, const Limits& limits) {
  const auto all = cases();
  if (!only.empty()) {
    const bool known = std::any_of(all.begin(), all.end(), [&](const Case& c) { return only == c.section; });
    if (!known) fail(ErrorCode::kInvalidArgument, "unknown section '" + std::string(only) + "'");
  }
  std::vector<ReproRow> rows;
  for (const auto& c : all) {
    if (!only.empty() && only != c.section) continue;
    ReproRow row;
    row.section = c.section;
    row.id = c.id;
    row.claim = c.claim;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run(limits);
      row.pass = o.pass;
      row.detail = o.detail;
    } catch (const Error& e) {
      row.pass = false;
      row.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string repro_to_json(const std::vector<ReproRow>& rows) {
  json a = json::array();
  std::size_t failed = 0;
  for (const auto& r : rows) {
    failed += r.pass ? 0 : 1;
    a.push_back({{"section", r.section},
                 {"id", r.id},
                 {"claim", r.claim},
                 {"pass", r.pass},
                 {"detail", r.detail},
                 {"elapsed_ms", r.elapsed_ms}});
  }
  return json{{"rows", a}, {"total", rows.size()}, {"failed", failed}}.dump();
}

std::string repro_to_text(const std::vector<ReproRow>& rows) {
  std::ostringstream os;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    failed += r.pass ? 0 : 1;
    char ms[32];
    std::snprintf(ms, sizeof ms, "%9.1f ms", r.elapsed_ms);
    os << (r.pass ? "PASS " : "FAIL ") << ms << "  " << r.section << "/" << r.id << "  " << r.claim << "\n";
    os << "                      " << r.detail << "\n";
  }
  os << rows.size() - failed << "/" << rows.size() << " rows pass\n";
  return os.str();
}

}  // namespace pf
