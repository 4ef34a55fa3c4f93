#include "padicforge/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <vector>

#include "json_ast.hpp"

namespace pf {

namespace {

enum class Tok { kEnd, kNumber, kRational, kIdent, kPlus, kMinus, kStar, kCaret, kLParen, kRParen, kComma, kSlash };

struct Token {
  Tok kind;
  std::string text;
  std::size_t begin;
  std::size_t end;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { lex(); }

  FnExpr parse() {
    FnExpr e = bitexpr();
    if (peek().kind != Tok::kEnd) error(peek(), "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  // --- lexing ---

  void lex() {
    std::size_t i = 0;
    while (true) {
      while (i < src_.size()) {
        if (std::isspace(static_cast<unsigned char>(src_[i]))) {
          ++i;
        } else if (src_[i] == '#') {
          while (i < src_.size() && src_[i] != '\n') ++i;
        } else {
          break;
        }
      }
      if (i >= src_.size()) {
        toks_.push_back({Tok::kEnd, "end of input", i, i});
        return;
      }
      const std::size_t b = i;
      const char c = src_[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
        Tok kind = Tok::kNumber;
        if (i + 1 < src_.size() && src_[i] == '/' && std::isdigit(static_cast<unsigned char>(src_[i + 1]))) {
          ++i;
          while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
          kind = Tok::kRational;
        }
        toks_.push_back({kind, std::string(src_.substr(b, i - b)), b, i});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_')) ++i;
        toks_.push_back({Tok::kIdent, std::string(src_.substr(b, i - b)), b, i});
        continue;
      }
      Tok kind;
      switch (c) {
        case '+': kind = Tok::kPlus; break;
        case '-': kind = Tok::kMinus; break;
        case '*': kind = Tok::kStar; break;
        case '^': kind = Tok::kCaret; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case ',': kind = Tok::kComma; break;
        case '/': kind = Tok::kSlash; break;
        default: {
          const auto [line, col] = position(b);
          throw SyntaxError(ErrorCode::kSyntaxError, std::string("unexpected character '") + c + "'", line, col);
        }
      }
      ++i;
      toks_.push_back({kind, std::string(1, c), b, i});
    }
  }

  std::pair<int, int> position(std::size_t offset) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void error(const Token& t, const std::string& msg, ErrorCode code = ErrorCode::kSyntaxError) const {
    const auto [line, col] = position(t.begin);
    throw SyntaxError(code, msg, line, col);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) error(peek(), std::string("expected ") + what + ", found '" + peek().text + "'");
    ++pos_;
  }

  FnExpr spanned(const FnExpr& e, std::size_t begin) const {
    const auto [line, col] = position(begin);
    const std::size_t end = pos_ > 0 ? toks_[pos_ - 1].end : begin;
    return e.with_span({line, col, begin, end});
  }

  // --- polynomial folding ---

  static bool falling_leaf(const FnExpr& e) {
    return e.kind() == NodeKind::kPoly && e.polynomial().basis() == Basis::kFallingFactorial;
  }

  static FnExpr leaf(RationalPoly poly, bool falling) {
    if (poly.degree() == 0) return FnExpr::constant(poly.is_zero() ? Rational(0) : poly.coeffs()[0]);
    if (falling) return FnExpr::poly(poly.to_falling());
    const RationalPoly mono = poly.to_monomial();
    if (mono.coeffs().size() == 2 && mono.coeffs()[0] == 0 && mono.coeffs()[1] == 1) return FnExpr::var();
    return FnExpr::poly(mono);
  }

  static FnExpr combine(NodeKind kind, const FnExpr& a, const FnExpr& b) {
    if (a.is_polynomial_leaf() && b.is_polynomial_leaf()) {
      const bool falling = falling_leaf(a) || falling_leaf(b);
      const RationalPoly pa = a.as_polynomial(), pb = b.as_polynomial();
      switch (kind) {
        case NodeKind::kAdd: return leaf(pa + pb, falling);
        case NodeKind::kSub: return leaf(pa - pb, falling);
        case NodeKind::kMul:
          if (pa.degree() == 0) return leaf(pb.scaled(pa.is_zero() ? Rational(0) : pa.coeffs()[0]), falling);
          if (pb.degree() == 0) return leaf(pa.scaled(pb.is_zero() ? Rational(0) : pb.coeffs()[0]), falling);
          return leaf(pa * pb, falling);
        default: break;
      }
    }
    switch (kind) {
      case NodeKind::kAdd: return FnExpr::add(a, b);
      case NodeKind::kSub: return FnExpr::sub(a, b);
      case NodeKind::kMul: return FnExpr::mul(a, b);
      case NodeKind::kXor: return FnExpr::bit_xor(a, b);
      case NodeKind::kAnd: return FnExpr::bit_and(a, b);
      case NodeKind::kOr: return FnExpr::bit_or(a, b);
      default: break;
    }
    fail(ErrorCode::kInvalidArgument, "combine: unsupported node kind");
  }

  static std::optional<unsigned> small_natural(const FnExpr& e) {
    if (e.kind() != NodeKind::kConst) return std::nullopt;
    const Rational& v = e.value();
    if (boost::multiprecision::denominator(v) != 1 || v < 0 || v > 4096) return std::nullopt;
    return static_cast<unsigned>(boost::multiprecision::numerator(v));
  }

  // --- grammar ---

  FnExpr bitexpr() {
    const std::size_t b = peek().begin;
    FnExpr lhs = sum();
    while (peek().kind == Tok::kIdent && (peek().text == "xor" || peek().text == "and" || peek().text == "or")) {
      const std::string op = take().text;
      FnExpr rhs = sum();
      const NodeKind kind = op == "xor" ? NodeKind::kXor : op == "and" ? NodeKind::kAnd : NodeKind::kOr;
      lhs = spanned(combine(kind, lhs, rhs), b);
    }
    return lhs;
  }

  FnExpr sum() {
    const std::size_t b = peek().begin;
    FnExpr lhs = term();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      const bool plus = take().kind == Tok::kPlus;
      FnExpr rhs = term();
      lhs = spanned(combine(plus ? NodeKind::kAdd : NodeKind::kSub, lhs, rhs), b);
    }
    return lhs;
  }

  FnExpr term() {
    const std::size_t b = peek().begin;
    FnExpr lhs = unary();
    while (peek().kind == Tok::kStar) {
      take();
      FnExpr rhs = unary();
      lhs = spanned(combine(NodeKind::kMul, lhs, rhs), b);
    }
    return lhs;
  }

  FnExpr unary() {
    const std::size_t b = peek().begin;
    if (peek().kind == Tok::kMinus) {
      take();
      FnExpr inner = unary();
      if (inner.is_polynomial_leaf()) return spanned(combine(NodeKind::kMul, FnExpr::constant(-1), inner), b);
      return spanned(FnExpr::sub(FnExpr::constant(0), inner), b);
    }
    return power();
  }

  FnExpr power() {
    const std::size_t b = peek().begin;
    FnExpr base = atom();
    if (peek().kind != Tok::kCaret) return base;
    take();
    FnExpr exponent = unary();
    if (const auto n = small_natural(exponent)) {
      if (base.is_polynomial_leaf()) {
        return spanned(leaf(base.as_polynomial().pow(*n), falling_leaf(base)), b);
      }
      if (*n == 0) return spanned(FnExpr::constant(1), b);
      if (*n == 1) return base;
      std::vector<Rational> mono(*n + 1, 0);
      mono[*n] = 1;
      return spanned(FnExpr::compose(FnExpr::poly(RationalPoly::monomial(std::move(mono))), base), b);
    }
    return spanned(FnExpr::pow(base, exponent), b);
  }

  FnExpr atom() {
    const Token& t = peek();
    const std::size_t b = t.begin;
    switch (t.kind) {
      case Tok::kNumber:
        take();
        return spanned(FnExpr::constant(Rational(BigInt(t.text))), b);
      case Tok::kRational: {
        take();
        const auto slash = t.text.find('/');
        const BigInt den(t.text.substr(slash + 1));
        if (den == 0) error(t, "zero denominator");
        return spanned(FnExpr::constant(Rational(BigInt(t.text.substr(0, slash)), den)), b);
      }
      case Tok::kLParen: {
        take();
        FnExpr inner = bitexpr();
        expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kIdent: return identifier();
      default: error(t, "expected an operand, found '" + t.text + "'");
    }
  }

  FnExpr identifier() {
    const Token t = take();
    const std::size_t b = t.begin;
    if (t.text == "x") return spanned(FnExpr::var(), b);
    static const std::vector<std::string> kFunctions = {"xor", "and", "or", "neg", "inv", "ff", "delta"};
    if (std::find(kFunctions.begin(), kFunctions.end(), t.text) == kFunctions.end()) {
      error(t, "unknown identifier '" + t.text + "'", ErrorCode::kUnknownIdentifier);
    }
    expect(Tok::kLParen, "'('");
    std::vector<FnExpr> args;
    args.push_back(bitexpr());
    while (peek().kind == Tok::kComma) {
      take();
      args.push_back(bitexpr());
    }
    expect(Tok::kRParen, "')'");
    const std::size_t want = (t.text == "neg" || t.text == "inv" || t.text == "delta") ? 1 : 2;
    if (args.size() != want) {
      error(t, t.text + " takes " + std::to_string(want) + " argument" + (want == 1 ? "" : "s"));
    }
    if (t.text == "xor") return spanned(combine(NodeKind::kXor, args[0], args[1]), b);
    if (t.text == "and") return spanned(combine(NodeKind::kAnd, args[0], args[1]), b);
    if (t.text == "or") return spanned(combine(NodeKind::kOr, args[0], args[1]), b);
    if (t.text == "neg") return spanned(FnExpr::neg(args[0]), b);
    if (t.text == "inv") return spanned(FnExpr::inv(args[0]), b);
    if (t.text == "delta") return spanned(FnExpr::delta(args[0]), b);
    // ff(arg, n)
    const auto n = small_natural(args[1]);
    if (!n) error(t, "ff expects a non-negative integer order");
    std::vector<Rational> coeffs(*n + 1, 0);
    coeffs[*n] = 1;
    const RationalPoly ff = RationalPoly::falling(std::move(coeffs));
    if (args[0].kind() == NodeKind::kVar) return spanned(leaf(ff, true), b);
    if (args[0].is_polynomial_leaf()) return spanned(leaf(ff.compose(args[0].as_polynomial()), true), b);
    return spanned(FnExpr::compose(FnExpr::poly(ff), args[0]), b);
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string rational_json(const Rational& q) {
  const BigInt d = boost::multiprecision::denominator(q);
  return d == 1 ? boost::multiprecision::numerator(q).str() : boost::multiprecision::numerator(q).str() + "/" + d.str();
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  const std::string s = v.get<std::string>();
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  const BigInt den(s.substr(slash + 1));
  if (den == 0) fail(ErrorCode::kSyntaxError, "zero denominator in AST JSON");
  return Rational(BigInt(s.substr(0, slash)), den);
}

NodeKind kind_from_name(const std::string& name) {
  static const NodeKind kAll[] = {NodeKind::kVar, NodeKind::kConst, NodeKind::kAdd,  NodeKind::kSub,  NodeKind::kMul,
                                  NodeKind::kXor, NodeKind::kAnd,   NodeKind::kOr,   NodeKind::kNeg,  NodeKind::kPow,
                                  NodeKind::kInv, NodeKind::kPoly,  NodeKind::kDelta, NodeKind::kCompose};
  for (NodeKind k : kAll) {
    if (node_kind_name(k) == name) return k;
  }
  fail(ErrorCode::kUnknownIdentifier, "unknown node kind '" + name + "' in AST JSON");
}

std::size_t arity(NodeKind k) {
  switch (k) {
    case NodeKind::kVar:
    case NodeKind::kConst:
    case NodeKind::kPoly: return 0;
    case NodeKind::kNeg:
    case NodeKind::kInv:
    case NodeKind::kDelta: return 1;
    default: return 2;
  }
}

}  // namespace

FnExpr parse_dsl(std::string_view text) { return Parser(text).parse(); }

nlohmann::json expr_to_json_value(const FnExpr& e) {
  nlohmann::json j;
  j["kind"] = node_kind_name(e.kind());
  if (e.kind() == NodeKind::kConst) j["value"] = rational_json(e.value());
  if (e.kind() == NodeKind::kPoly) {
    const auto& poly = e.polynomial();
    j["basis"] = poly.basis() == Basis::kMonomial ? "monomial" : "falling";
    auto& coeffs = j["coeffs"] = nlohmann::json::array();
    for (const auto& c : poly.coeffs()) coeffs.push_back(rational_json(c));
  }
  if (!e.children().empty()) {
    auto& ch = j["children"] = nlohmann::json::array();
    for (const auto& c : e.children()) ch.push_back(expr_to_json_value(c));
  }
  return j;
}

FnExpr expr_from_json_value(const nlohmann::json& j) {
  try {
    const NodeKind kind = kind_from_name(j.at("kind").get<std::string>());
    std::vector<FnExpr> ch;
    if (j.contains("children")) {
      for (const auto& c : j.at("children")) ch.push_back(expr_from_json_value(c));
    }
    if (ch.size() != arity(kind)) {
      fail(ErrorCode::kSyntaxError, std::string(node_kind_name(kind)) + " node with " + std::to_string(ch.size()) +
                                        " children");
    }
    switch (kind) {
      case NodeKind::kVar: return FnExpr::var();
      case NodeKind::kConst: return FnExpr::constant(rational_from_json(j.at("value")));
      case NodeKind::kPoly: {
        std::vector<Rational> coeffs;
        for (const auto& c : j.at("coeffs")) coeffs.push_back(rational_from_json(c));
        const std::string basis = j.value("basis", "monomial");
        if (basis != "monomial" && basis != "falling") fail(ErrorCode::kSyntaxError, "unknown basis '" + basis + "'");
        return FnExpr::poly(basis == "monomial" ? RationalPoly::monomial(std::move(coeffs))
                                                : RationalPoly::falling(std::move(coeffs)));
      }
      case NodeKind::kAdd: return FnExpr::add(ch[0], ch[1]);
      case NodeKind::kSub: return FnExpr::sub(ch[0], ch[1]);
      case NodeKind::kMul: return FnExpr::mul(ch[0], ch[1]);
      case NodeKind::kXor: return FnExpr::bit_xor(ch[0], ch[1]);
      case NodeKind::kAnd: return FnExpr::bit_and(ch[0], ch[1]);
      case NodeKind::kOr: return FnExpr::bit_or(ch[0], ch[1]);
      case NodeKind::kNeg: return FnExpr::neg(ch[0]);
      case NodeKind::kPow: return FnExpr::pow(ch[0], ch[1]);
      case NodeKind::kInv: return FnExpr::inv(ch[0]);
      case NodeKind::kDelta: return FnExpr::delta(ch[0]);
      case NodeKind::kCompose: return FnExpr::compose(ch[0], ch[1]);
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kSyntaxError, std::string("malformed AST JSON: ") + ex.what());
  } catch (const std::runtime_error& ex) {
    if (dynamic_cast<const Error*>(&ex)) throw;
    fail(ErrorCode::kSyntaxError, std::string("malformed number in AST JSON: ") + ex.what());
  }
  fail(ErrorCode::kSyntaxError, "malformed AST JSON");
}

std::string expr_to_json(const FnExpr& e) { return expr_to_json_value(e).dump(); }

FnExpr expr_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kSyntaxError, std::string("AST JSON does not parse: ") + ex.what());
  }
  return expr_from_json_value(j);
}

}  // namespace pf
