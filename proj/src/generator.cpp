#include "padicforge/generator.hpp"

#include <algorithm>

#include "json_ast.hpp"
#include "padicforge/dsl.hpp"

namespace pf {

using nlohmann::json;

namespace {

CompositeModulus modulus_from_json(const json& j) {
  if (j.contains("m")) {
    const json& m = j.at("m");
    return CompositeModulus::factor(m.is_string() ? BigInt(m.get<std::string>()) : BigInt(m.get<std::uint64_t>()));
  }
  return CompositeModulus::of(Modulus(j.at("p").get<std::uint64_t>(), j.at("k").get<unsigned>()));
}

json modulus_to_json(const CompositeModulus& m) {
  if (m.factors().size() == 1) return {{"p", m.factors()[0].prime()}, {"k", m.factors()[0].exponent()}};
  return {{"m", m.value().str()}};
}

FnExpr fn_from_json(const json& j) {
  if (j.is_string()) return parse_dsl(j.get<std::string>());
  return expr_from_json_value(j);
}

// Index of the state factor with the same prime, or -1.
int factor_with_prime(const CompositeModulus& m, std::uint64_t p) {
  for (std::size_t i = 0; i < m.factors().size(); ++i) {
    if (m.factors()[i].prime() == p) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(const std::string& text) {
  GeneratorSpec spec;
  try {
    const json j = json::parse(text);
    spec.modulus = modulus_from_json(j.at("modulus"));
    spec.state_fn = fn_from_json(j.at("state_fn"));
    if (j.contains("out_fn") && !j.at("out_fn").is_null()) spec.out_fn = fn_from_json(j.at("out_fn"));
    if (j.contains("output_modulus") && !j.at("output_modulus").is_null()) {
      spec.output_modulus = modulus_from_json(j.at("output_modulus"));
    }
    if (j.contains("seed")) {
      const json& s = j.at("seed");
      spec.seed = s.is_string() ? BigInt(s.get<std::string>()) : BigInt(s.get<std::uint64_t>());
    }
    spec.unchecked = j.value("unchecked", false);
  } catch (const json::exception& e) {
    fail(ErrorCode::kSyntaxError, std::string("malformed generator spec: ") + e.what());
  }
  return spec;
}

std::string GeneratorSpec::to_json() const {
  json j;
  j["modulus"] = modulus_to_json(modulus);
  j["seed"] = seed.str();
  j["state_fn"] = expr_to_json_value(state_fn);
  if (out_fn) j["out_fn"] = expr_to_json_value(*out_fn);
  if (output_modulus) j["output_modulus"] = modulus_to_json(*output_modulus);
  j["unchecked"] = unchecked;
  return j.dump();
}

void validate_spec(const GeneratorSpec& spec, const Limits& limits) {
  if (spec.seed < 0 || spec.seed >= spec.modulus.value()) {
    fail(ErrorCode::kInvalidArgument, "seed must lie in [0, " + spec.modulus.value().str() + ")");
  }
  for (const auto& f : spec.out_modulus().factors()) {
    const int i = factor_with_prime(spec.modulus, f.prime());
    if (i < 0 || spec.modulus.factors()[static_cast<std::size_t>(i)].exponent() < f.exponent()) {
      fail(ErrorCode::kInvalidArgument, "output modulus " + spec.out_modulus().to_string() +
                                            " does not divide the state modulus " + spec.modulus.to_string());
    }
  }
  if (spec.unchecked) return;
  for (const auto& f : spec.modulus.factors()) {
    const Certificate c = certify(spec.state_fn, Property::kErgodic, f.prime(), 0, limits);
    if (c.verdict != Verdict::kProven) {
      fail(ErrorCode::kUncertifiedGenerator, "state function is not certified ergodic at p=" +
                                                 std::to_string(f.prime()) + " (" +
                                                 std::string(verdict_name(c.verdict)) + "); pass unchecked to run anyway");
    }
  }
  if (spec.out_fn) {
    for (const auto& f : spec.out_modulus().factors()) {
      std::string reason;
      if (!syntactically_compatible(*spec.out_fn, f.prime(), &reason)) {
        fail(ErrorCode::kUncertifiedGenerator, "output function is not compatible: " + reason);
      }
      if (!bijective_mod(*spec.out_fn, f, limits).bijective) {
        fail(ErrorCode::kUncertifiedGenerator, "output function is not bijective modulo " + f.to_string());
      }
    }
  }
}

Generator::Generator(GeneratorSpec spec, const Limits& limits) : spec_(std::move(spec)) {
  validate_spec(spec_, limits);
  state_ = spec_.modulus.decompose(spec_.seed);
  for (const auto& f : spec_.modulus.factors()) {
    step_.emplace_back(spec_.state_fn, f);
    out_.push_back(spec_.out_fn ? std::optional<CompiledFn>(CompiledFn(*spec_.out_fn, f)) : std::nullopt);
  }
  for (const auto& f : spec_.out_modulus().factors()) out_factor_.push_back(factor_with_prime(spec_.modulus, f.prime()));
}

BigInt Generator::state() const { return spec_.modulus.combine(state_); }

BigInt Generator::output_of_state() const {
  const auto& outs = spec_.out_modulus().factors();
  std::vector<BigInt> parts;
  parts.reserve(outs.size());
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto src = static_cast<std::size_t>(out_factor_[i]);
    const BigInt v = out_[src] ? out_[src]->eval_big(state_[src]) : state_[src];
    parts.push_back(v % outs[i].value());
  }
  return spec_.out_modulus().combine(parts);
}

BigInt Generator::next() {
  for (std::size_t i = 0; i < state_.size(); ++i) {
    const CompiledFn& f = step_[i];
    state_[i] = f.word_path() && state_[i] < (BigInt(1) << 63)
                    ? BigInt(f(static_cast<std::uint64_t>(state_[i])))
                    : f.eval_big(state_[i]);
  }
  ++steps_;
  return output_of_state();
}

std::uint64_t Generator::next_word() {
  if (spec_.out_modulus().value() > (BigInt(1) << 64) - 1) {
    fail(ErrorCode::kInvalidArgument, "output modulus does not fit 64 bits");
  }
  return static_cast<std::uint64_t>(next());
}

unsigned Generator::bytes_per_word() const {
  const auto& outs = spec_.out_modulus().factors();
  if (outs.size() != 1 || outs[0].prime() != 2 || outs[0].exponent() < 8) {
    fail(ErrorCode::kNotBinaryModulus,
         "byte output needs a modulus 2^t with t >= 8, got " + spec_.out_modulus().to_string());
  }
  return outs[0].exponent() / 8;
}

std::vector<std::uint8_t> Generator::emit_bytes(std::uint64_t count) {
  const unsigned width = bytes_per_word();
  std::vector<std::uint8_t> out;
  out.reserve(count * width);
  for (std::uint64_t i = 0; i < count; ++i) {
    BigInt w = next();
    for (unsigned b = 0; b < width; ++b) {
      out.push_back(static_cast<std::uint8_t>(static_cast<unsigned>(w & 0xff)));
      w >>= 8;
    }
  }
  return out;
}

std::string CensusReport::to_json() const {
  json j;
  j["modulus"] = modulus.str();
  j["output_modulus"] = output_modulus.str();
  j["steps"] = steps;
  j["period"] = period;
  j["preperiod"] = preperiod;
  j["min_count"] = min_count;
  j["max_count"] = max_count;
  j["distinct"] = distinct;
  j["uniform"] = uniform;
  if (counts.size() <= 4096) j["counts"] = counts;
  return j.dump();
}

CensusReport full_period_census(const GeneratorSpec& spec, const Limits& limits) {
  const BigInt& mv = spec.modulus.value();
  const BigInt& nv = spec.out_modulus().value();
  if (mv > limits.cap_states) {
    fail(ErrorCode::kCapExceeded, "census over " + mv.str() + " states exceeds the state cap");
  }
  const auto m = static_cast<std::uint64_t>(mv);
  const auto n = static_cast<std::uint64_t>(nv);
  Generator gen(spec, limits);
  CensusReport r;
  r.modulus = mv;
  r.output_modulus = nv;
  r.steps = m;
  r.counts.assign(n, 0);
  constexpr std::uint64_t kUnseen = ~std::uint64_t{0};
  std::vector<std::uint64_t> first_visit(m, kUnseen);
  first_visit[static_cast<std::uint64_t>(gen.state())] = 0;
  for (std::uint64_t step = 1; step <= m; ++step) {
    ++r.counts[static_cast<std::uint64_t>(gen.next())];
    const auto s = static_cast<std::uint64_t>(gen.state());
    if (r.period == 0) {
      if (first_visit[s] != kUnseen) {
        r.preperiod = first_visit[s];
        r.period = step - first_visit[s];
      } else {
        first_visit[s] = step;
      }
    }
  }
  const auto [lo, hi] = std::minmax_element(r.counts.begin(), r.counts.end());
  r.min_count = *lo;
  r.max_count = *hi;
  r.distinct = static_cast<std::uint64_t>(std::count_if(r.counts.begin(), r.counts.end(), [](auto c) { return c > 0; }));
  r.uniform = r.min_count == r.max_count;
  return r;
}

}  // namespace pf
