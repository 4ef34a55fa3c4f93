#include "padicforge/analysis.hpp"

#include <algorithm>
#include <utility>

#include "json.hpp"

namespace pf {

using nlohmann::json;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

namespace {

// Arithmetic in Z/p^k on 64-bit representatives.
struct Ring {
  u64 p;
  unsigned k;
  u64 m;

  explicit Ring(const Modulus& mod) : p(mod.prime()), k(mod.exponent()), m(mod.word()) {}

  u64 add(u64 a, u64 b) const {
    const u64 s = a + b;
    return s >= m ? s - m : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (m - b); }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % m); }
  unsigned val(u64 a) const {
    if (a == 0) return k;
    unsigned v = 0;
    while (a % p == 0) {
      a /= p;
      ++v;
    }
    return v;
  }
  u64 shift_down(u64 a, unsigned v) const {
    for (unsigned i = 0; i < v; ++i) a /= p;
    return a;
  }
  u64 pow_p(unsigned e) const {
    u64 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
  }
  u64 inv(u64 u) const { return static_cast<u64>(inverse_mod(BigInt(u), BigInt(m))); }
};

using Row = std::vector<u64>;

// Rows generating the same module as everything inserted, in echelon form
// with at most one row per leading column.
class Echelon {
 public:
  Echelon(const Ring& ring, std::size_t width) : r_(ring), pivot_(width), val_(width), uinv_(width) {}

  void insert(Row row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 0) continue;
      unsigned v = r_.val(row[j]);
      if (!pivot_[j]) {
        set_pivot(j, std::move(row), v);
        return;
      }
      if (v < val_[j]) {
        Row old = std::move(*pivot_[j]);
        set_pivot(j, std::move(row), v);
        row = std::move(old);
      }
      const Row& q = *pivot_[j];
      const u64 f = r_.mul(r_.shift_down(row[j], val_[j]), uinv_[j]);
      for (std::size_t t = j; t < row.size(); ++t) row[t] = r_.sub(row[t], r_.mul(f, q[t]));
    }
  }

  std::vector<Row> rows() const {
    std::vector<Row> out;
    for (const auto& p : pivot_) {
      if (p) out.push_back(*p);
    }
    return out;
  }

 private:
  void set_pivot(std::size_t j, Row row, unsigned v) {
    val_[j] = v;
    uinv_[j] = r_.inv(r_.shift_down(row[j], v));
    pivot_[j] = std::move(row);
  }

  const Ring& r_;
  std::vector<std::optional<Row>> pivot_;
  std::vector<unsigned> val_;
  std::vector<u64> uinv_;
};

// Diagonalisation A V = U^-1 D over the first `cols` columns; any further
// column is a right-hand side carried along by the row operations.
struct Smith {
  std::size_t rank = 0;
  std::vector<unsigned> val;
  std::vector<u64> uinv;
  std::vector<Row> rows;
  std::vector<Row> v;  // cols x cols
};

Smith smith(const Ring& r, std::vector<Row> rows, std::size_t cols) {
  Smith s;
  s.v.assign(cols, Row(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) s.v[i][i] = 1;
  const std::size_t n = rows.size();
  for (std::size_t t = 0; t < std::min(n, cols); ++t) {
    unsigned best = r.k;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = t; i < n && best > 0; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        const unsigned v = r.val(rows[i][j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == r.k) break;
    std::swap(rows[t], rows[bi]);
    if (bj != t) {
      for (auto& row : rows) std::swap(row[t], row[bj]);
      for (auto& row : s.v) std::swap(row[t], row[bj]);
    }
    const u64 uinv = r.inv(r.shift_down(rows[t][t], best));
    for (std::size_t i = t + 1; i < n; ++i) {
      if (rows[i][t] == 0) continue;
      const u64 f = r.mul(r.shift_down(rows[i][t], best), uinv);
      for (std::size_t j = t; j < rows[i].size(); ++j) rows[i][j] = r.sub(rows[i][j], r.mul(f, rows[t][j]));
    }
    for (std::size_t j = t + 1; j < cols; ++j) {
      if (rows[t][j] == 0) continue;
      const u64 f = r.mul(r.shift_down(rows[t][j], best), uinv);
      rows[t][j] = 0;
      for (auto& row : s.v) row[j] = r.sub(row[j], r.mul(f, row[t]));
    }
    s.val.push_back(best);
    s.uinv.push_back(uinv);
    ++s.rank;
  }
  s.rows = std::move(rows);
  return s;
}

Row apply_v(const Ring& r, const Smith& s, const Row& z) {
  Row y(z.size(), 0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) y[i] = r.add(y[i], r.mul(s.v[i][j], z[j]));
  }
  return y;
}

std::optional<Row> solve_order(const Ring& r, std::span<const u64> seq, unsigned order, RelationFlavor flavor) {
  const std::size_t len = seq.size();
  const bool monic = flavor == RelationFlavor::kMonic;
  const std::size_t cols = monic ? order + 1 : order + 2;
  Echelon ech(r, monic ? cols + 1 : cols);
  for (std::size_t n = 0; n < len; ++n) {
    Row row(monic ? cols + 1 : cols);
    row[0] = 1 % r.m;
    for (std::size_t j = 1; j < row.size(); ++j) row[j] = seq[(n + j - 1) % len];
    ech.insert(std::move(row));
  }
  const Smith s = smith(r, ech.rows(), cols);
  Row z(cols, 0);
  if (monic) {
    for (std::size_t i = s.rank; i < s.rows.size(); ++i) {
      if (s.rows[i][cols] != 0) return std::nullopt;
    }
    for (std::size_t t = 0; t < s.rank; ++t) {
      const u64 b = s.rows[t][cols];
      if (r.val(b) < s.val[t]) return std::nullopt;
      z[t] = r.mul(r.shift_down(b, s.val[t]), s.uinv[t]);
    }
    return apply_v(r, s, z);
  }
  if (s.rank < cols) {
    z[s.rank] = 1;
    return apply_v(r, s, z);
  }
  if (flavor == RelationFlavor::kAny) {
    for (std::size_t t = 0; t < s.rank; ++t) {
      if (s.val[t] > 0) {
        z[t] = r.pow_p(r.k - s.val[t]);
        return apply_v(r, s, z);
      }
    }
  }
  return std::nullopt;
}

void check_sequence(std::span<const u64> seq, const Modulus& m) {
  if (seq.empty()) fail(ErrorCode::kEmptySequence, "sequence is empty");
  if (seq.size() > kMaxSequenceLength) {
    fail(ErrorCode::kCapExceeded, "sequence of " + std::to_string(seq.size()) + " terms exceeds 2^20");
  }
  if (!m.fits_word()) fail(ErrorCode::kInvalidArgument, "modulus " + m.to_string() + " exceeds 63 bits");
  const u64 mw = m.word();
  for (u64 x : seq) {
    if (x >= mw) fail(ErrorCode::kInvalidArgument, "sequence term " + std::to_string(x) + " is not reduced mod " + m.to_string());
  }
}

json optional_order(const std::optional<unsigned>& o) { return o ? json(*o) : json(nullptr); }

json strings(std::span<const u64> v) {
  json a = json::array();
  for (u64 x : v) a.push_back(std::to_string(x));
  return a;
}

}  // namespace

std::string_view relation_flavor_name(RelationFlavor f) noexcept {
  switch (f) {
    case RelationFlavor::kMonic: return "MONIC";
    case RelationFlavor::kUnit: return "UNIT";
    case RelationFlavor::kAny: return "ANY";
  }
  return "?";
}

std::string ComplexityResult::to_json() const {
  json j;
  j["flavor"] = relation_flavor_name(flavor);
  j["r_max"] = r_max;
  j["order"] = optional_order(order);
  if (order) {
    j["relation"] = strings(relation);
  } else {
    j["none_found_up_to"] = r_max;
  }
  return j.dump();
}

bool relation_holds(std::span<const u64> seq, const Modulus& m, std::span<const u64> relation, RelationFlavor flavor) {
  if (seq.empty() || relation.size() < 2) return false;
  const Ring r(m);
  const std::size_t len = seq.size();
  const bool monic = flavor == RelationFlavor::kMonic;
  const std::size_t terms = relation.size() - 1;
  for (std::size_t n = 0; n < len; ++n) {
    u64 acc = relation[0] % r.m;
    for (std::size_t j = 0; j < terms; ++j) acc = r.add(acc, r.mul(relation[j + 1] % r.m, seq[(n + j) % len]));
    const u64 want = monic ? seq[(n + terms) % len] : 0;
    if (acc != want) return false;
  }
  if (flavor == RelationFlavor::kUnit) {
    return std::any_of(relation.begin() + 1, relation.end(), [&](u64 c) { return c % r.p != 0; });
  }
  if (flavor == RelationFlavor::kAny) {
    return std::any_of(relation.begin(), relation.end(), [&](u64 c) { return c % r.m != 0; });
  }
  return true;
}

ComplexityResult affine_linear_complexity(std::span<const u64> seq, const Modulus& m, unsigned r_max,
                                          RelationFlavor flavor) {
  check_sequence(seq, m);
  const Ring r(m);
  ComplexityResult out;
  out.flavor = flavor;
  out.r_max = r_max;
  for (unsigned order = 1; order <= r_max; ++order) {
    auto rel = solve_order(r, seq, order, flavor);
    if (!rel) continue;
    if (!relation_holds(seq, m, *rel, flavor)) {
      fail(ErrorCode::kInvalidArgument, "relation of order " + std::to_string(order) + " failed verification");
    }
    out.order = order;
    out.relation = std::move(*rel);
    break;
  }
  return out;
}

u64 cyclic_period(std::span<const u64> seq) {
  const u64 n = seq.size();
  for (u64 d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (u64 i = 0; i < n && ok; ++i) ok = seq[i] == seq[(i + d) % n];
    if (ok) return d;
  }
  return n;
}

std::vector<u64> bit_plane_periods(std::span<const u64> seq, const Modulus& m) {
  if (m.prime() != 2) fail(ErrorCode::kNotBinaryModulus, "bit planes need p = 2, got " + m.to_string());
  std::vector<u64> out;
  std::vector<u64> bits(seq.size());
  for (unsigned j = 0; j < m.exponent(); ++j) {
    for (std::size_t i = 0; i < seq.size(); ++i) bits[i] = (seq[i] >> j) & 1;
    out.push_back(cyclic_period(bits));
  }
  return out;
}

std::string SequenceReport::to_json() const {
  json j;
  j["modulus"] = {{"p", modulus.prime()}, {"k", modulus.exponent()}};
  j["length"] = length;
  j["period"] = period;
  j["r_max"] = r_max;
  j["linear_complexity"] = optional_order(monic.order);
  j["monic"] = json::parse(monic.to_json());
  j["unit"] = json::parse(unit.to_json());
  j["any"] = json::parse(any.to_json());
  if (modulus.prime() == 2) j["bit_periods"] = bit_periods;
  j["census_ok"] = census_ok;
  return j.dump();
}

SequenceReport analyze_sequence(std::span<const u64> seq, const Modulus& m, unsigned r_max) {
  check_sequence(seq, m);
  SequenceReport rep;
  rep.modulus = m;
  rep.length = seq.size();
  rep.r_max = r_max;
  rep.period = cyclic_period(seq);
  const auto one_period = seq.first(rep.period);
  rep.monic = affine_linear_complexity(one_period, m, r_max, RelationFlavor::kMonic);
  rep.unit = affine_linear_complexity(one_period, m, r_max, RelationFlavor::kUnit);
  rep.any = affine_linear_complexity(one_period, m, r_max, RelationFlavor::kAny);
  if (m.prime() == 2) rep.bit_periods = bit_plane_periods(one_period, m);
  const u64 mw = m.word();
  if (seq.size() % mw == 0) {
    std::vector<u64> counts(mw, 0);
    for (u64 x : seq) ++counts[x];
    rep.census_ok = std::all_of(counts.begin(), counts.end(), [&](u64 c) { return c == counts[0]; });
  }
  return rep;
}

std::vector<u64> generator_sequence(const GeneratorSpec& spec, const Limits& limits) {
  if (spec.out_modulus().factors().size() != 1) {
    fail(ErrorCode::kInvalidArgument, "analysis needs a prime-power output modulus, got " + spec.out_modulus().to_string());
  }
  const BigInt& mv = spec.modulus.value();
  if (mv > kMaxSequenceLength || mv > limits.cap_states) {
    fail(ErrorCode::kCapExceeded, "a full period of " + mv.str() + " terms exceeds the sequence cap");
  }
  Generator gen(spec, limits);
  const auto n = static_cast<u64>(mv);
  std::vector<u64> seq;
  seq.reserve(n);
  for (u64 i = 0; i < n; ++i) seq.push_back(static_cast<u64>(gen.next()));
  return seq;
}

SequenceReport analyze_generator(const GeneratorSpec& spec, unsigned r_max, const Limits& limits) {
  const auto seq = generator_sequence(spec, limits);
  return analyze_sequence(seq, spec.out_modulus().factors()[0], r_max);
}

std::vector<ProfileEntry> complexity_growth_profile(const FnExpr& f, u64 p, unsigned k_lo, unsigned k_hi,
                                                    unsigned r_max, const Limits& limits) {
  if (k_lo == 0 || k_lo > k_hi) fail(ErrorCode::kInvalidArgument, "need 1 <= k_lo <= k_hi");
  std::vector<ProfileEntry> out;
  for (unsigned k = k_lo; k <= k_hi; ++k) {
    const Modulus m(p, k);
    const auto t = transitive_mod(f, m, limits);
    if (!t.transitive) {
      fail(ErrorCode::kUncertifiedGenerator, "state function is not transitive modulo " + m.to_string());
    }
    const CompiledFn step(f, m);
    const u64 n = m.word();
    if (n > kMaxSequenceLength) fail(ErrorCode::kCapExceeded, "period " + m.to_string() + " exceeds 2^20");
    std::vector<u64> seq(n);
    u64 x = 0;
    for (u64 i = 0; i < n; ++i) {
      seq[i] = x;
      x = step(x);
    }
    out.push_back({k, affine_linear_complexity(seq, m, r_max, RelationFlavor::kUnit)});
  }
  return out;
}

std::string profile_to_json(u64 p, const std::vector<ProfileEntry>& profile) {
  json rows = json::array();
  for (const auto& e : profile) {
    json row = json::parse(e.result.to_json());
    row["k"] = e.k;
    rows.push_back(std::move(row));
  }
  return json{{"p", p}, {"profile", rows}}.dump();
}

}  // namespace pf
