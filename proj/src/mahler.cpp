#include "padicforge/mahler.hpp"

#include <algorithm>

#include "json.hpp"

namespace pf {

namespace {

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

void require_cap(const MahlerSeries& s, std::size_t cap) {
  if (s.degree() > cap) {
    fail(ErrorCode::kDegreeCapExceeded,
         "series degree " + std::to_string(s.degree()) + " exceeds cap " + std::to_string(cap));
  }
}

void require_integer_valued(const MahlerSeries& s) {
  if (!s.is_integer_valued()) {
    fail(ErrorCode::kNotIntegerValued, "series coefficients are not " + std::to_string(s.prime()) + "-adic integers");
  }
}

// ord_p(a) >= need, with the convention ord_p(0) = infinity.
bool ord_at_least(const Rational& a, std::uint64_t p, long need) {
  return a == 0 || ord_p_rational(a, p) >= need;
}

std::string rational_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const BigInt d = denominator(q);
  return d == 1 ? numerator(q).str() : numerator(q).str() + "/" + d.str();
}

}  // namespace

// --- Stirling numbers --------------------------------------------------------

std::vector<std::vector<BigInt>> stirling_first_table(std::size_t n_max) {
  std::vector<std::vector<BigInt>> s(n_max + 1, std::vector<BigInt>(n_max + 1, 0));
  s[0][0] = 1;
  for (std::size_t n = 0; n < n_max; ++n) {
    for (std::size_t k = 1; k <= n + 1; ++k) {
      s[n + 1][k] = s[n][k - 1] - BigInt(n) * s[n][k];
    }
  }
  return s;
}

std::vector<std::vector<BigInt>> stirling_second_table(std::size_t n_max) {
  std::vector<std::vector<BigInt>> S(n_max + 1, std::vector<BigInt>(n_max + 1, 0));
  S[0][0] = 1;
  for (std::size_t n = 0; n < n_max; ++n) {
    for (std::size_t k = 1; k <= n + 1; ++k) {
      S[n + 1][k] = BigInt(k) * S[n][k] + S[n][k - 1];
    }
  }
  return S;
}

// --- RationalPoly ------------------------------------------------------------

RationalPoly::RationalPoly(Basis basis, std::vector<Rational> coeffs) : basis_(basis), coeffs_(std::move(coeffs)) {
  trim();
}

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RationalPoly RationalPoly::to_monomial() const {
  if (basis_ == Basis::kMonomial) return *this;
  // (x)_n = sum_k s(n, k) x^k
  const auto s = stirling_first_table(coeffs_.size());
  std::vector<Rational> out(coeffs_.size(), 0);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (coeffs_[n] == 0) continue;
    for (std::size_t k = 0; k <= n; ++k) out[k] += coeffs_[n] * Rational(s[n][k]);
  }
  return monomial(std::move(out));
}

RationalPoly RationalPoly::to_falling() const {
  if (basis_ == Basis::kFallingFactorial) return *this;
  // x^n = sum_k S(n, k) (x)_k
  const auto S = stirling_second_table(coeffs_.size());
  std::vector<Rational> out(coeffs_.size(), 0);
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (coeffs_[n] == 0) continue;
    for (std::size_t k = 0; k <= n; ++k) out[k] += coeffs_[n] * Rational(S[n][k]);
  }
  return falling(std::move(out));
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational acc = 0;
  if (basis_ == Basis::kMonomial) {
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  } else {
    Rational ff = 1;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      acc += coeffs_[i] * ff;
      ff *= x - Rational(static_cast<long long>(i));
    }
  }
  return acc;
}

BigInt RationalPoly::common_denominator() const {
  BigInt l = 1;
  for (const auto& c : coeffs_) l = boost::multiprecision::lcm(l, BigInt(boost::multiprecision::denominator(c)));
  return l;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  const RationalPoly rhs = o.in_basis(basis_);
  std::vector<Rational> out(std::max(coeffs_.size(), rhs.coeffs_.size()), 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) out[i] += rhs.coeffs_[i];
  return {basis_, std::move(out)};
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const { return *this + o.scaled(-1); }

RationalPoly RationalPoly::scaled(const Rational& c) const {
  std::vector<Rational> out = coeffs_;
  for (auto& v : out) v *= c;
  return {basis_, std::move(out)};
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  const RationalPoly a = to_monomial(), b = o.to_monomial();
  if (a.is_zero() || b.is_zero()) return monomial({});
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return monomial(std::move(out));
}

RationalPoly RationalPoly::compose(const RationalPoly& inner) const {
  const RationalPoly outer = to_monomial();
  RationalPoly acc = monomial({});
  for (auto it = outer.coeffs_.rbegin(); it != outer.coeffs_.rend(); ++it) {
    acc = acc * inner + monomial({*it});
  }
  return acc.to_monomial();
}

RationalPoly RationalPoly::pow(unsigned e) const {
  RationalPoly acc = monomial({1});
  for (unsigned i = 0; i < e; ++i) acc = acc * *this;
  return acc;
}

std::string RationalPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    std::string term;
    if (i == 0) {
      term = rational_string(coeffs_[i]);
    } else {
      const std::string base =
          basis_ == Basis::kMonomial ? (i == 1 ? "x" : "x^" + std::to_string(i)) : "ff(x," + std::to_string(i) + ")";
      term = coeffs_[i] == 1 ? base : "(" + rational_string(coeffs_[i]) + ")*" + base;
    }
    s += s.empty() ? term : " + " + term;
  }
  return s;
}

bool operator==(const RationalPoly& a, const RationalPoly& b) {
  return a.to_monomial().coeffs_ == b.to_monomial().coeffs_;
}

// --- MahlerSeries ------------------------------------------------------------

MahlerSeries::MahlerSeries(std::vector<Rational> coeffs, std::uint64_t p, unsigned precision_exponent)
    : coeffs_(std::move(coeffs)), p_(p), precision_(precision_exponent) {
  if (!is_prime(p)) fail(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0);
}

MahlerSeries MahlerSeries::from_poly(const RationalPoly& poly, std::uint64_t p) {
  // f = sum b_i (x)_i = sum b_i i! C(x, i)
  const RationalPoly ff = poly.to_falling();
  std::vector<Rational> a;
  a.reserve(ff.coeffs().size());
  for (std::size_t i = 0; i < ff.coeffs().size(); ++i) a.push_back(ff.coeffs()[i] * Rational(factorial(i)));
  return MahlerSeries(std::move(a), p);
}

bool MahlerSeries::is_integer_valued() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [&](const Rational& a) { return ord_at_least(a, p_, 0); });
}

Rational MahlerSeries::value_at(const BigInt& x) const {
  Rational acc = 0;
  BigInt binom = 1;  // C(x, i)
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i > 0) {
      if (x - BigInt(i - 1) <= 0) break;
      binom = binom * (x - BigInt(i - 1)) / BigInt(i);
    }
    acc += coeffs_[i] * Rational(binom);
  }
  return acc;
}

std::string MahlerSeries::to_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["precision"] = precision_;
  auto& arr = j["coeffs"] = nlohmann::json::array();
  for (const auto& c : coeffs_) {
    arr.push_back({boost::multiprecision::numerator(c).str(), boost::multiprecision::denominator(c).str()});
  }
  return j.dump();
}

MahlerSeries MahlerSeries::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<Rational> coeffs;
    for (const auto& pair : j.at("coeffs")) {
      const auto part = [](const nlohmann::json& v) {
        return v.is_string() ? BigInt(v.get<std::string>()) : BigInt(v.get<long long>());
      };
      coeffs.emplace_back(part(pair.at(0)), part(pair.at(1)));
    }
    return MahlerSeries(std::move(coeffs), j.at("p").get<std::uint64_t>(), j.value("precision", 0u));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSyntaxError, std::string("malformed series JSON: ") + e.what());
  }
}

MahlerSeries coeffs_from_values(std::span<const Rational> values, std::uint64_t p) {
  // Forward difference table: a_i = Delta^i f(0).
  std::vector<Rational> row(values.begin(), values.end());
  std::vector<Rational> a;
  a.reserve(row.size());
  while (!row.empty()) {
    a.push_back(row.front());
    for (std::size_t j = 0; j + 1 < row.size(); ++j) row[j] = row[j + 1] - row[j];
    row.pop_back();
  }
  return MahlerSeries(std::move(a), p);
}

long ord_p_rational(const Rational& q, std::uint64_t p) {
  if (q == 0) fail(ErrorCode::kInvalidArgument, "ord_p of zero rational");
  const auto num = ord_p(boost::multiprecision::numerator(q), p);
  const auto den = ord_p(boost::multiprecision::denominator(q), p);
  return static_cast<long>(*num) - static_cast<long>(*den);
}

ResidueInt rational_to_residue(const Rational& q, const Modulus& m) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den % m.prime() == 0) {
    fail(ErrorCode::kNotIntegerValued, rational_string(q) + " is not a " + std::to_string(m.prime()) + "-adic integer");
  }
  return ResidueInt(num * inverse_mod(den, m.value()), m);
}

ResidueInt eval(const MahlerSeries& series, const ResidueInt& x) {
  const Modulus& m = x.modulus();
  const std::uint64_t p = m.prime();
  if (p != series.prime()) fail(ErrorCode::kMixedModuli, "series prime differs from the residue prime");
  const BigInt& xv = x.residue();
  BigInt acc = 0;
  for (std::size_t i = 0; i < series.coeffs().size(); ++i) {
    const Rational& a = series.coeffs()[i];
    if (a == 0 || xv < i) continue;
    const long v = ord_p_rational(a, p);
    if (v >= 0) {
      acc += rational_to_residue(a, m).residue() * binomial_eval(xv, i, m).residue();
      continue;
    }
    // Denominator divisible by p: the binomial must absorb p^(-v).
    const unsigned need = static_cast<unsigned>(-v);
    const unsigned ord_binom = ord_p_factorial(static_cast<std::uint64_t>(xv), p) - ord_p_factorial(i, p) -
                               ord_p_factorial(static_cast<std::uint64_t>(xv - i), p);
    if (ord_binom < need) {
      fail(ErrorCode::kNotIntegerValued, "term " + std::to_string(i) + " of the series is not a p-adic integer at x=" +
                                             xv.str());
    }
    const Modulus wide = m.with_exponent(m.exponent() + need);
    const BigInt binom = binomial_eval(xv, i, wide).residue() / pow_big(p, need);
    acc += rational_to_residue(a * Rational(pow_big(p, need)), m).residue() * binom;
  }
  return ResidueInt(acc, m);
}

// --- criteria ----------------------------------------------------------------

bool is_compatible(const MahlerSeries& series, std::size_t degree_cap) {
  require_cap(series, degree_cap);
  require_integer_valued(series);
  const std::uint64_t p = series.prime();
  for (std::size_t i = p; i < series.coeffs().size(); ++i) {
    if (!ord_at_least(series.coeffs()[i], p, floor_log(i, p))) return false;
  }
  return true;
}

bool is_measure_preserving_2adic(const MahlerSeries& series, std::size_t degree_cap) {
  if (series.prime() != 2) fail(ErrorCode::kWrongPrime, "2-adic criterion applied to p=" + std::to_string(series.prime()));
  require_cap(series, degree_cap);
  require_integer_valued(series);
  const auto& a = series.coeffs();
  if (a.size() < 2 || ord_at_least(a[1], 2, 1)) return false;  // a_1 must be odd
  for (std::size_t i = 2; i < a.size(); ++i) {
    if (!ord_at_least(a[i], 2, floor_log(i, 2) + 1)) return false;
  }
  return true;
}

bool is_ergodic_2adic(const MahlerSeries& series, std::size_t degree_cap) {
  if (series.prime() != 2) fail(ErrorCode::kWrongPrime, "2-adic criterion applied to p=" + std::to_string(series.prime()));
  require_cap(series, degree_cap);
  require_integer_valued(series);
  const auto& a = series.coeffs();
  // f = 1 + x + sum c_i 2^(floor(log2(i+1))+1) C(x, i)
  if (!ord_at_least(a[0] - 1, 2, 1)) return false;
  const Rational a1 = a.size() > 1 ? a[1] : Rational(0);
  if (!ord_at_least(a1 - 1, 2, 2)) return false;
  for (std::size_t i = 2; i < a.size(); ++i) {
    if (!ord_at_least(a[i], 2, floor_log(i + 1, 2) + 1)) return false;
  }
  return true;
}

bool is_ergodic_sufficient_oddp(const MahlerSeries& series, std::size_t degree_cap) {
  const std::uint64_t p = series.prime();
  if (p == 2) fail(ErrorCode::kWrongPrime, "odd-prime criterion applied to p=2");
  require_cap(series, degree_cap);
  require_integer_valued(series);
  const auto& a = series.coeffs();
  if (ord_at_least(a[0], p, 1)) return false;
  const Rational a1 = a.size() > 1 ? a[1] : Rational(0);
  if (!ord_at_least(a1 - 1, p, 1)) return false;
  for (std::size_t i = 2; i < a.size(); ++i) {
    if (!ord_at_least(a[i], p, floor_log(i + 1, p) + 1)) return false;
  }
  return true;
}

bool is_measure_preserving_sufficient_oddp(const MahlerSeries& series, std::size_t degree_cap) {
  const std::uint64_t p = series.prime();
  if (p == 2) fail(ErrorCode::kWrongPrime, "odd-prime criterion applied to p=2");
  require_cap(series, degree_cap);
  require_integer_valued(series);
  const auto& a = series.coeffs();
  if (a.size() < 2 || ord_at_least(a[1], p, 1)) return false;
  for (std::size_t i = 2; i < a.size(); ++i) {
    if (!ord_at_least(a[i], p, floor_log(i, p) + 1)) return false;
  }
  return true;
}

unsigned lambda_for_rho(unsigned rho, std::uint64_t p) {
  for (unsigned k = 1;; ++k) {
    // 2 (p^k - 1)/(p - 1) = 2 (1 + p + ... + p^(k-1))
    BigInt geometric = 0, pk = 1;
    for (unsigned j = 0; j < k; ++j) {
      geometric += pk;
      pk *= p;
    }
    if (2 * geometric - k > rho) return k;
  }
}

RhoLambda rho_lambda(const RationalPoly& poly, std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::kNotPrime, std::to_string(p) + " is not prime");
  const auto rho = ord_p(poly.common_denominator(), p);
  const unsigned r = rho.value_or(0);
  return {r, lambda_for_rho(r, p)};
}

}  // namespace pf
