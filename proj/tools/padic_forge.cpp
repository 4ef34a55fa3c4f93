// padic-forge: command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "padicforge/padicforge.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kCap = 3, kUnknown = 4, kRefuted = 5 };

struct Options {
  std::uint64_t p = 2;
  unsigned k = 0;  // 0: 8, or 8 * word bytes for --bin
  std::string m;
  std::string seed = "0";
  std::uint64_t cap_states = 0;
  unsigned rmax = 0;
  bool json = false;
  std::string file;
  std::string expr;
};

struct CliError {
  pf_status status;
};

int exit_code(pf_status s) {
  switch (s) {
    case PF_OK: return kOk;
    case PF_SYNTAX_ERROR:
    case PF_UNKNOWN_IDENTIFIER: return kParse;
    case PF_CAP_EXCEEDED: return kCap;
    default: return kFailure;
  }
}

void check(pf_status s) {
  if (s != PF_OK) throw CliError{s};
}

struct StrFree {
  void operator()(char* s) const { pf_string_free(s); }
};
using OwnedStr = std::unique_ptr<char, StrFree>;

struct ExprFree {
  void operator()(pf_expr* e) const { pf_expr_free(e); }
};
using OwnedExpr = std::unique_ptr<pf_expr, ExprFree>;

struct GenFree {
  void operator()(pf_generator* g) const { pf_generator_free(g); }
};
using OwnedGen = std::unique_ptr<pf_generator, GenFree>;

std::string take(char* s) { return OwnedStr(s).get(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    throw CliError{PF_IO_ERROR};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_json(const std::string& s) {
  const auto i = s.find_first_not_of(" \t\r\n");
  return i != std::string::npos && s[i] == '{';
}

std::string source_text(const Options& o) {
  if (!o.file.empty()) return read_file(o.file);
  if (o.expr.empty()) {
    std::cerr << "error: give a function as an argument or with --file\n";
    throw CliError{PF_INVALID_ARGUMENT};
  }
  return o.expr;
}

OwnedExpr parse_expr(const std::string& text) {
  pf_expr* e = nullptr;
  if (looks_like_json(text)) {
    check(pf_expr_from_json(text.c_str(), &e));
  } else {
    int line = 0;
    int col = 0;
    check(pf_expr_parse(text.c_str(), &e, &line, &col));
  }
  return OwnedExpr(e);
}

pf_modulus_spec modulus(const Options& o) {
  return pf_modulus_spec{o.p, o.k ? o.k : 8u, o.m.empty() ? nullptr : o.m.c_str()};
}

pf_limits limits(const Options& o) {
  pf_limits l = pf_limits_default();
  if (o.cap_states) l.cap_states = o.cap_states;
  if (o.rmax) l.rmax = o.rmax;
  return l;
}

void add_common(CLI::App* app, Options& o, bool positional = true) {
  app->add_option("-p", o.p, "Prime p")->check(CLI::PositiveNumber);
  app->add_option("-k", o.k, "Exponent k")->check(CLI::PositiveNumber);
  app->add_option("-m", o.m, "Composite modulus m (decimal)");
  app->add_option("--seed", o.seed, "Generator seed");
  app->add_option("--cap-states", o.cap_states, "Brute-force state cap")->check(CLI::PositiveNumber);
  app->add_option("--rmax", o.rmax, "Largest relation order searched")->check(CLI::PositiveNumber);
  app->add_flag("--json", o.json, "Machine-readable output");
  app->add_option("--file", o.file, "Read the function (DSL, JSON AST or generator spec) from a file");
  if (positional) app->add_option("function", o.expr, "Function in the DSL");
}

void print_check_text(const json& j) {
  std::cout << j["expression"].get<std::string>() << " mod " << j["modulus"].get<std::string>() << "\n";
  for (const auto& f : j["factors"]) {
    std::cout << "  mod " << f["p"] << "^" << f["k"] << ": compatible " << f["compatible"] << ", bijective "
              << f["bijective"] << ", transitive " << f["transitive"] << " (" << f["orbit_status"].get<std::string>()
              << ", orbit " << f["orbit_length"] << ")\n";
    if (f.contains("bijective_witness")) {
      std::cout << "    collision f(" << f["bijective_witness"]["x"] << ") = f(" << f["bijective_witness"]["y"] << ")\n";
    }
    if (f.contains("criteria")) std::cout << "    coefficient criteria " << f["criteria"].dump() << "\n";
  }
}

int cmd_check(const Options& o) {
  const auto e = parse_expr(source_text(o));
  const pf_limits l = limits(o);
  char* out = nullptr;
  check(pf_check(e.get(), modulus(o), &l, &out));
  const json j = json::parse(take(out));
  if (o.json) {
    std::cout << j.dump() << "\n";
  } else {
    print_check_text(j);
  }
  return kOk;
}

int cmd_certify(const Options& o, const std::string& property, unsigned generic_k) {
  const auto e = parse_expr(source_text(o));
  const pf_limits l = limits(o);
  char* out = nullptr;
  pf_verdict verdict = PF_UNKNOWN;
  check(pf_certify(e.get(), property.c_str(), o.p, generic_k, &l, &out, &verdict));
  const json j = json::parse(take(out));
  if (o.json) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << j["verdict"].get<std::string>() << " " << j["property"].get<std::string>() << " via "
              << j["theorem"].get<std::string>() << " at " << j["modulus"]["p"] << "^" << j["modulus"]["k"] << "\n";
    if (j.contains("note")) std::cout << "  " << j["note"].get<std::string>() << "\n";
    if (j.contains("witness")) std::cout << "  witness " << j["witness"].dump() << "\n";
  }
  if (verdict == PF_UNKNOWN) return kUnknown;
  if (verdict == PF_REFUTED) return kRefuted;
  return kOk;
}

struct GenOptions {
  std::string out_fn;
  unsigned out_k = 0;
  bool unchecked = false;
};

OwnedGen make_generator(const Options& o, const GenOptions& g) {
  const pf_limits l = limits(o);
  pf_generator* gen = nullptr;
  std::string text = o.file.empty() ? o.expr : read_file(o.file);
  if (looks_like_json(text) && json::parse(text).contains("state_fn")) {
    check(pf_generator_from_spec_json(text.c_str(), &l, &gen));
    return OwnedGen(gen);
  }
  const auto state = parse_expr(source_text(o));
  OwnedExpr out;
  if (!g.out_fn.empty()) out = parse_expr(g.out_fn);
  const pf_modulus_spec out_mod{o.p, g.out_k, nullptr};
  check(pf_generator_create(state.get(), out.get(), modulus(o), g.out_k ? &out_mod : nullptr, o.seed.c_str(),
                            g.unchecked, &l, &gen));
  return OwnedGen(gen);
}

int cmd_gen(const Options& o, const GenOptions& g, std::uint64_t count, bool hex, bool words) {
  const auto gen = make_generator(o, g);
  if (words) {
    for (std::uint64_t i = 0; i < count; ++i) {
      char* v = nullptr;
      check(pf_generator_next(gen.get(), &v));
      std::cout << take(v) << "\n";
    }
  } else {
    unsigned width = 0;
    check(pf_generator_bytes_per_word(gen.get(), &width));
    std::vector<std::uint8_t> buf(count * width);
    check(pf_generator_emit_bytes(gen.get(), count, buf.data(), buf.size()));
    if (hex) {
      static const char* digits = "0123456789abcdef";
      std::string line;
      for (std::size_t i = 0; i < buf.size(); ++i) {
        line += digits[buf[i] >> 4];
        line += digits[buf[i] & 15];
        if ((i + 1) % 32 == 0 || i + 1 == buf.size()) {
          std::cout << line << "\n";
          line.clear();
        }
      }
    } else {
      std::fwrite(buf.data(), 1, buf.size(), stdout);
    }
  }
  std::fflush(stdout);
  char* spec = nullptr;
  check(pf_generator_spec_json(gen.get(), &spec));
  json report{{"spec", json::parse(take(spec))}, {"words", count}};
  std::cerr << report.dump() << "\n";
  return kOk;
}

int cmd_analyze(const Options& o, const GenOptions& g, const std::string& bin, unsigned word_bytes,
                const std::string& profile) {
  const pf_limits l = limits(o);
  char* out = nullptr;
  if (!profile.empty()) {
    unsigned lo = 0;
    unsigned hi = 0;
    if (std::sscanf(profile.c_str(), "%u:%u", &lo, &hi) != 2) {
      std::cerr << "error: --profile expects K_LO:K_HI\n";
      return kFailure;
    }
    const auto e = parse_expr(source_text(o));
    check(pf_complexity_profile(e.get(), o.p, lo, hi, &l, &out));
  } else if (!bin.empty()) {
    if (word_bytes == 0 || word_bytes > 8) {
      std::cerr << "error: --word-bytes must be 1..8\n";
      return kFailure;
    }
    const std::string data = read_file(bin);
    std::vector<std::uint64_t> words(data.size() / word_bytes);
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::uint64_t w = 0;
      for (unsigned b = 0; b < word_bytes; ++b) {
        w |= std::uint64_t{static_cast<unsigned char>(data[i * word_bytes + b])} << (8 * b);
      }
      words[i] = w;
    }
    const unsigned k = o.k ? o.k : 8 * word_bytes;
    const std::uint64_t mask = k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    for (auto& w : words) w &= mask;
    check(pf_analyze_words(words.data(), words.size(), 2, k, l.rmax, &out));
  } else {
    const auto gen = make_generator(o, g);
    check(pf_analyze_generator(gen.get(), &l, &out));
  }
  const json j = json::parse(take(out));
  std::cout << (o.json ? j.dump() : j.dump(2)) << "\n";
  return kOk;
}

int cmd_repro(const Options& o, const std::string& only) {
  const pf_limits l = limits(o);
  char* out = nullptr;
  unsigned failures = 0;
  if (o.json) {
    check(pf_repro(only.empty() ? nullptr : only.c_str(), &l, &out, &failures));
    std::cout << take(out) << "\n";
  } else {
    check(pf_repro_text(only.empty() ? nullptr : only.c_str(), &l, &out, &failures));
    std::cout << take(out);
  }
  return failures == 0 ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear congruential generators over Z/p^k"};
  app.set_version_flag("--version", std::string(pf_version()));
  app.require_subcommand(1);

  Options o;
  GenOptions g;
  std::string property = "ergodic";
  unsigned generic_k = 0;
  std::uint64_t count = 16;
  bool hex = false;
  bool words = false;
  std::string bin;
  unsigned word_bytes = 1;
  std::string profile;
  std::string only;

  auto* check_cmd = app.add_subcommand("check", "Brute-force and coefficient checks modulo m");
  add_common(check_cmd, o);

  auto* cert_cmd = app.add_subcommand("certify", "Certificate valid for every k");
  add_common(cert_cmd, o);
  cert_cmd->add_option("--property", property, "compatible | measure_preserving | ergodic | equiprobable")
      ->check(CLI::IsMember({"compatible", "measure_preserving", "ergodic", "equiprobable"}));
  cert_cmd->add_option("--generic-k", generic_k, "Brute-force depth for functions without a class threshold");

  auto* gen_cmd = app.add_subcommand("gen", "Emit generator output (bytes to stdout, report to stderr)");
  add_common(gen_cmd, o);
  gen_cmd->add_option("--count", count, "Number of output words");
  gen_cmd->add_flag("--hex", hex, "Hex-encode the bytes");
  gen_cmd->add_flag("--words", words, "Print decimal output words instead of bytes");
  gen_cmd->add_option("--out-fn", g.out_fn, "Output function");
  gen_cmd->add_option("--out-k", g.out_k, "Output modulus exponent t (output mod p^t)");
  gen_cmd->add_flag("--unchecked", g.unchecked, "Run an uncertified state function");

  auto* analyze_cmd = app.add_subcommand("analyze", "Linear complexity and bit-plane periods");
  add_common(analyze_cmd, o);
  analyze_cmd->add_option("--bin", bin, "Raw little-endian words to analyze (mod 2^k)");
  analyze_cmd->add_option("--word-bytes", word_bytes, "Bytes per word in --bin");
  analyze_cmd->add_option("--profile", profile, "Unit-relation complexity for k in K_LO:K_HI");
  analyze_cmd->add_option("--out-fn", g.out_fn, "Output function");
  analyze_cmd->add_option("--out-k", g.out_k, "Output modulus exponent t");
  analyze_cmd->add_flag("--unchecked", g.unchecked, "Run an uncertified state function");

  auto* repro_cmd = app.add_subcommand("repro", "Regression table of the worked examples");
  add_common(repro_cmd, o, false);
  repro_cmd->add_option("--only", only, "Run one section (section1 .. section5)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  try {
    if (*check_cmd) return cmd_check(o);
    if (*cert_cmd) return cmd_certify(o, property, generic_k);
    if (*gen_cmd) return cmd_gen(o, g, count, hex, words);
    if (*analyze_cmd) return cmd_analyze(o, g, bin, word_bytes, profile);
    if (*repro_cmd) return cmd_repro(o, only);
  } catch (const CliError& e) {
    if (*pf_last_error()) std::cerr << "error [" << pf_status_name(e.status) << "]: " << pf_last_error() << "\n";
    return exit_code(e.status);
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kFailure;
}
