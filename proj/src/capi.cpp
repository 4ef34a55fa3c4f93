#include "padicforge/padicforge.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "padicforge/analysis.hpp"
#include "padicforge/certify.hpp"
#include "padicforge/dsl.hpp"
#include "padicforge/generator.hpp"
#include "padicforge/repro.hpp"

struct pf_expr {
  pf::FnExpr expr;
};

struct pf_generator {
  pf::Generator gen;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

pf_status set_error(pf_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
pf_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return PF_OK;
  } catch (const pf::Error& e) {
    return set_error(static_cast<pf_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(PF_SYNTAX_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PF_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PF_INTERNAL_ERROR, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pf::CompositeModulus to_modulus(const pf_modulus_spec& m) {
  if (m.m) return pf::CompositeModulus::factor(pf::BigInt(std::string(m.m)));
  if (m.k == 0) pf::fail(pf::ErrorCode::kInvalidArgument, "exponent k must be positive");
  return pf::CompositeModulus::of(pf::Modulus(m.p, m.k));
}

pf::Limits to_limits(const pf_limits* l) {
  pf::Limits out = pf::Limits::from_env();
  if (l) {
    if (l->cap_states) out.cap_states = l->cap_states;
    if (l->cap_inputs) out.cap_inputs = l->cap_inputs;
  }
  return out;
}

unsigned rmax_of(const pf_limits* l) { return l && l->rmax ? l->rmax : pf::kDefaultRMax; }

pf::Property parse_property(const char* s) {
  const std::string p = s ? s : "";
  if (p == "compatible") return pf::Property::kCompatible;
  if (p == "measure_preserving" || p == "bijective") return pf::Property::kMeasurePreserving;
  if (p == "ergodic" || p == "transitive") return pf::Property::kErgodic;
  if (p == "equiprobable") return pf::Property::kEquiprobable;
  pf::fail(pf::ErrorCode::kInvalidArgument, "unknown property '" + p + "'");
}

#define PF_REQUIRE(ptr)                                                       \
  do {                                                                        \
    if (!(ptr)) return set_error(PF_NULL_ARGUMENT, #ptr " must not be null"); \
  } while (0)

json check_factor(const pf::FnExpr& f, const pf::Modulus& m, const pf::Limits& limits) {
  json j;
  j["p"] = m.prime();
  j["k"] = m.exponent();
  const pf::WordMap fm = pf::word_map(f, m);
  const auto c = pf::compatible_mod(fm, m, limits);
  j["compatible"] = c.compatible;
  if (c.witness) j["compatible_witness"] = {{"x", c.witness->first}, {"j", c.witness->second}};
  const auto b = pf::bijective_mod(fm, m, limits);
  j["bijective"] = b.bijective;
  if (b.collision) j["bijective_witness"] = {{"x", b.collision->first}, {"y", b.collision->second}};
  const auto t = pf::transitive_mod(fm, m, limits);
  j["transitive"] = t.transitive;
  j["orbit_status"] = pf::orbit_status_name(t.status);
  j["orbit_length"] = t.orbit_length;
  if (f.is_polynomial_leaf()) {
    const auto s = pf::MahlerSeries::from_poly(f.as_polynomial(), m.prime());
    json crit;
    crit["integer_valued"] = s.is_integer_valued();
    if (s.degree() <= pf::kDefaultDegreeCap && s.is_integer_valued()) {
      crit["compatible"] = pf::is_compatible(s);
      if (m.prime() == 2) {
        crit["measure_preserving"] = pf::is_measure_preserving_2adic(s);
        crit["ergodic"] = pf::is_ergodic_2adic(s);
      } else {
        crit["measure_preserving_sufficient"] = pf::is_measure_preserving_sufficient_oddp(s);
        crit["ergodic_sufficient"] = pf::is_ergodic_sufficient_oddp(s);
      }
    }
    j["criteria"] = crit;
  }
  return j;
}

}  // namespace

extern "C" {

const char* pf_version(void) { return "0.3.0"; }

const char* pf_last_error(void) { return g_last_error.c_str(); }

const char* pf_status_name(pf_status status) {
  switch (status) {
    case PF_OK: return "OK";
    case PF_NULL_ARGUMENT: return "NULL_ARGUMENT";
    case PF_INTERNAL_ERROR: return "INTERNAL_ERROR";
    default: break;
  }
  const int s = static_cast<int>(status);
  if (s >= 1 && s <= 22) return pf::error_code_name(static_cast<pf::ErrorCode>(s)).data();
  return "UNKNOWN_STATUS";
}

void pf_string_free(char* s) { std::free(s); }

pf_limits pf_limits_default(void) {
  const pf::Limits l = pf::Limits::from_env();
  return pf_limits{l.cap_states, l.cap_inputs, pf::kDefaultRMax};
}

pf_status pf_expr_parse(const char* text, pf_expr** out, int* line, int* column) {
  PF_REQUIRE(text);
  PF_REQUIRE(out);
  *out = nullptr;
  try {
    g_last_error.clear();
    *out = new pf_expr{pf::parse_dsl(text)};
    return PF_OK;
  } catch (const pf::SyntaxError& e) {
    if (line) *line = e.line();
    if (column) *column = e.column();
    return set_error(static_cast<pf_status>(e.code()), e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

pf_status pf_expr_from_json(const char* text, pf_expr** out) {
  PF_REQUIRE(text);
  PF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new pf_expr{pf::expr_from_json(text)}; });
}

pf_status pf_expr_to_json(const pf_expr* e, char** out) {
  PF_REQUIRE(e);
  PF_REQUIRE(out);
  return guarded([&] { *out = dup(pf::expr_to_json(e->expr)); });
}

pf_status pf_expr_to_string(const pf_expr* e, char** out) {
  PF_REQUIRE(e);
  PF_REQUIRE(out);
  return guarded([&] { *out = dup(e->expr.to_string()); });
}

pf_status pf_expr_eval(const pf_expr* e, const char* x, pf_modulus_spec m, char** result) {
  PF_REQUIRE(e);
  PF_REQUIRE(x);
  PF_REQUIRE(result);
  return guarded([&] {
    const auto mod = to_modulus(m);
    const pf::BigInt xv = pf::mod_floor(pf::BigInt(std::string(x)), mod.value());
    *result = dup(pf::eval_expr(e->expr, xv, mod).str());
  });
}

void pf_expr_free(pf_expr* e) { delete e; }

pf_status pf_check(const pf_expr* e, pf_modulus_spec m, const pf_limits* limits, char** out) {
  PF_REQUIRE(e);
  PF_REQUIRE(out);
  return guarded([&] {
    const auto mod = to_modulus(m);
    const auto lim = to_limits(limits);
    json j;
    j["expression"] = e->expr.to_string();
    j["modulus"] = mod.value().str();
    json factors = json::array();
    bool compatible = true;
    bool bijective = true;
    bool transitive = true;
    for (const auto& f : mod.factors()) {
      json fj = check_factor(e->expr, f, lim);
      compatible = compatible && fj["compatible"].get<bool>();
      bijective = bijective && fj["bijective"].get<bool>();
      transitive = transitive && fj["transitive"].get<bool>();
      factors.push_back(std::move(fj));
    }
    j["factors"] = factors;
    j["compatible"] = compatible;
    j["bijective"] = bijective;
    j["transitive"] = transitive;
    *out = dup(j.dump());
  });
}

pf_status pf_certify(const pf_expr* e, const char* property, uint64_t p, unsigned generic_k, const pf_limits* limits,
                     char** out, pf_verdict* verdict) {
  PF_REQUIRE(e);
  PF_REQUIRE(out);
  return guarded([&] {
    const auto cert = pf::certify(e->expr, parse_property(property), p, generic_k, to_limits(limits));
    *out = dup(cert.to_json());
    if (verdict) *verdict = static_cast<pf_verdict>(static_cast<int>(cert.verdict));
  });
}

pf_status pf_generator_create(const pf_expr* state_fn, const pf_expr* out_fn, pf_modulus_spec m,
                              const pf_modulus_spec* output_modulus, const char* seed, int unchecked,
                              const pf_limits* limits, pf_generator** out) {
  PF_REQUIRE(state_fn);
  PF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    pf::GeneratorSpec spec;
    spec.state_fn = state_fn->expr;
    if (out_fn) spec.out_fn = out_fn->expr;
    spec.modulus = to_modulus(m);
    if (output_modulus) spec.output_modulus = to_modulus(*output_modulus);
    spec.seed = seed ? pf::BigInt(std::string(seed)) : pf::BigInt(0);
    spec.unchecked = unchecked != 0;
    *out = new pf_generator{pf::Generator(std::move(spec), to_limits(limits))};
  });
}

pf_status pf_generator_from_spec_json(const char* text, const pf_limits* limits, pf_generator** out) {
  PF_REQUIRE(text);
  PF_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new pf_generator{pf::Generator(pf::GeneratorSpec::from_json(text), to_limits(limits))}; });
}

pf_status pf_generator_spec_json(const pf_generator* g, char** out) {
  PF_REQUIRE(g);
  PF_REQUIRE(out);
  return guarded([&] { *out = dup(g->gen.spec().to_json()); });
}

pf_status pf_generator_next(pf_generator* g, char** value) {
  PF_REQUIRE(g);
  PF_REQUIRE(value);
  return guarded([&] { *value = dup(g->gen.next().str()); });
}

pf_status pf_generator_next_u64(pf_generator* g, uint64_t* value) {
  PF_REQUIRE(g);
  PF_REQUIRE(value);
  return guarded([&] { *value = g->gen.next_word(); });
}

pf_status pf_generator_bytes_per_word(const pf_generator* g, unsigned* bytes) {
  PF_REQUIRE(g);
  PF_REQUIRE(bytes);
  return guarded([&] { *bytes = g->gen.bytes_per_word(); });
}

pf_status pf_generator_emit_bytes(pf_generator* g, uint64_t count, uint8_t* buf, size_t buf_len) {
  PF_REQUIRE(g);
  PF_REQUIRE(buf);
  return guarded([&] {
    const unsigned width = g->gen.bytes_per_word();
    if (count > buf_len / width) {
      pf::fail(pf::ErrorCode::kInvalidArgument, "buffer holds fewer than " + std::to_string(count) + " words");
    }
    const auto bytes = g->gen.emit_bytes(count);
    std::memcpy(buf, bytes.data(), bytes.size());
  });
}

pf_status pf_generator_census(const pf_generator* g, const pf_limits* limits, char** out) {
  PF_REQUIRE(g);
  PF_REQUIRE(out);
  return guarded([&] { *out = dup(pf::full_period_census(g->gen.spec(), to_limits(limits)).to_json()); });
}

void pf_generator_free(pf_generator* g) { delete g; }

pf_status pf_analyze_words(const uint64_t* words, size_t n, uint64_t p, unsigned k, unsigned rmax, char** out) {
  PF_REQUIRE(out);
  if (n > 0) PF_REQUIRE(words);
  return guarded([&] {
    const pf::Modulus m(p, k);
    *out = dup(pf::analyze_sequence(std::span<const uint64_t>(words, n), m, rmax ? rmax : pf::kDefaultRMax).to_json());
  });
}

pf_status pf_analyze_generator(const pf_generator* g, const pf_limits* limits, char** out) {
  PF_REQUIRE(g);
  PF_REQUIRE(out);
  return guarded([&] { *out = dup(pf::analyze_generator(g->gen.spec(), rmax_of(limits), to_limits(limits)).to_json()); });
}

pf_status pf_complexity_profile(const pf_expr* f, uint64_t p, unsigned k_lo, unsigned k_hi, const pf_limits* limits,
                                char** out) {
  PF_REQUIRE(f);
  PF_REQUIRE(out);
  return guarded([&] {
    const auto prof = pf::complexity_growth_profile(f->expr, p, k_lo, k_hi, rmax_of(limits), to_limits(limits));
    *out = dup(pf::profile_to_json(p, prof));
  });
}

static pf_status repro_common(const char* only, const pf_limits* limits, char** out, unsigned* failures, bool text) {
  PF_REQUIRE(out);
  return guarded([&] {
    const auto rows = pf::run_repro(only ? only : "", to_limits(limits));
    unsigned failed = 0;
    for (const auto& r : rows) failed += r.pass ? 0 : 1;
    if (failures) *failures = failed;
    *out = dup(text ? pf::repro_to_text(rows) : pf::repro_to_json(rows));
  });
}

pf_status pf_repro(const char* only, const pf_limits* limits, char** out, unsigned* failures) {
  return repro_common(only, limits, out, failures, false);
}

pf_status pf_repro_text(const char* only, const pf_limits* limits, char** out, unsigned* failures) {
  return repro_common(only, limits, out, failures, true);
}

}  // extern "C"
