#ifndef LIFTSYS_RING_HPP
#define LIFTSYS_RING_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/field.hpp"
#include "liftsys/linalg.hpp"
#include "liftsys/sparse_echelon.hpp"

namespace liftsys::ring {

// Exponent vector. Total degree is cached.
class Monomial {
 public:
  using Exponent = std::uint16_t;

  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {
    for (auto e : exps_) degree_ += e;
  }

  static Monomial variable(std::size_t nvars, std::size_t i, int power = 1) {
    Monomial m(nvars);
    m.set(i, power);
    return m;
  }

  std::size_t nvars() const noexcept { return exps_.size(); }
  int degree() const noexcept { return degree_; }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<Exponent>& exponents() const noexcept { return exps_; }

  void set(std::size_t i, int power) {
    if (power < 0 || power > std::numeric_limits<Exponent>::max())
      throw ExponentOverflow("exponent " + std::to_string(power) + " out of range");
    degree_ += power - exps_[i];
    exps_[i] = static_cast<Exponent>(power);
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.nvars() != b.nvars()) throw ArityMismatch("monomial product");
    Monomial out(a.nvars());
    for (std::size_t i = 0; i < a.nvars(); ++i) {
      const int e = int(a.exps_[i]) + int(b.exps_[i]);
      if (e > std::numeric_limits<Exponent>::max()) throw ExponentOverflow("monomial product");
      out.exps_[i] = static_cast<Exponent>(e);
    }
    out.degree_ = a.degree_ + b.degree_;
    return out;
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] > other.exps_[i]) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

 private:
  std::vector<Exponent> exps_;
  int degree_ = 0;
};

// Degree reverse lexicographic order with x_1 > x_2 > ... > x_v.
inline bool degrevlex_greater(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  for (std::size_t i = a.nvars(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto e : m.exponents()) {
      h ^= e;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

template <class F>
class Polynomial {
 public:
  using Element = typename F::Element;
  struct Term {
    Monomial monomial;
    Element coeff;
  };

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  // Sorts, merges equal monomials and drops zero coefficients.
  static Polynomial from_terms(const F& field, std::size_t nvars, std::vector<Term> terms) {
    Polynomial p(nvars);
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return degrevlex_greater(a.monomial, b.monomial); });
    for (auto& t : terms) {
      if (t.monomial.nvars() != nvars) throw ArityMismatch("term arity differs from polynomial arity");
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coeff = field.add(p.terms_.back().coeff, t.coeff);
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(p.terms_, [&](const Term& t) { return field.is_zero(t.coeff); });
    return p;
  }

  static Polynomial constant(const F& field, std::size_t nvars, const Element& c) {
    Polynomial p(nvars);
    if (!field.is_zero(c)) p.terms_.push_back({Monomial(nvars), c});
    return p;
  }

  static Polynomial monomial(const F& field, const Monomial& m, const Element& c) {
    Polynomial p(m.nvars());
    if (!field.is_zero(c)) p.terms_.push_back({m, c});
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  // Largest total degree; -1 for the zero polynomial.
  int degree() const noexcept { return terms_.empty() ? -1 : terms_.front().monomial.degree(); }

  // Smallest total degree (the order in the local ring); -1 for zero.
  int order() const noexcept {
    int best = -1;
    for (const auto& t : terms_)
      if (best < 0 || t.monomial.degree() < best) best = t.monomial.degree();
    return best;
  }

  Element constant_term(const F& field) const {
    if (!terms_.empty() && terms_.back().monomial.degree() == 0) return terms_.back().coeff;
    return field.zero();
  }

  bool equals(const F& field, const Polynomial& other) const {
    if (nvars_ != other.nvars_ || terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!(terms_[i].monomial == other.terms_[i].monomial)) return false;
      if (!field.equal(terms_[i].coeff, other.terms_[i].coeff)) return false;
    }
    return true;
  }

 private:
  std::size_t nvars_ = 0;
  std::vector<Term> terms_;
};

template <class F>
Polynomial<F> add(const F& field, const Polynomial<F>& p, const Polynomial<F>& q) {
  if (p.nvars() != q.nvars()) throw ArityMismatch("polynomial sum");
  std::vector<typename Polynomial<F>::Term> terms(p.terms());
  terms.insert(terms.end(), q.terms().begin(), q.terms().end());
  return Polynomial<F>::from_terms(field, p.nvars(), std::move(terms));
}

template <class F>
Polynomial<F> scale(const F& field, const Polynomial<F>& p, const typename F::Element& c) {
  std::vector<typename Polynomial<F>::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.monomial, field.mul(t.coeff, c)});
  return Polynomial<F>::from_terms(field, p.nvars(), std::move(terms));
}

template <class F>
Polynomial<F> neg(const F& field, const Polynomial<F>& p) {
  return scale(field, p, field.neg(field.one()));
}

template <class F>
Polynomial<F> sub(const F& field, const Polynomial<F>& p, const Polynomial<F>& q) {
  return add(field, p, neg(field, q));
}

namespace detail {

template <class F>
Polynomial<F> multiply_bounded(const F& field, const Polynomial<F>& p, const Polynomial<F>& q, int max_degree) {
  if (p.nvars() != q.nvars()) throw ArityMismatch("polynomial product");
  std::unordered_map<Monomial, typename F::Element, MonomialHash> acc;
  for (const auto& a : p.terms()) {
    for (const auto& b : q.terms()) {
      if (max_degree >= 0 && a.monomial.degree() + b.monomial.degree() > max_degree) continue;
      auto m = a.monomial * b.monomial;
      auto c = field.mul(a.coeff, b.coeff);
      auto it = acc.find(m);
      if (it == acc.end()) {
        acc.emplace(std::move(m), std::move(c));
      } else {
        it->second = field.add(it->second, c);
      }
    }
  }
  std::vector<typename Polynomial<F>::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) terms.push_back({m, c});
  return Polynomial<F>::from_terms(field, p.nvars(), std::move(terms));
}

}  // namespace detail

template <class F>
Polynomial<F> mul(const F& field, const Polynomial<F>& p, const Polynomial<F>& q) {
  return detail::multiply_bounded(field, p, q, -1);
}

template <class F>
Polynomial<F> truncate(const F& field, const Polynomial<F>& p, int max_degree) {
  std::vector<typename Polynomial<F>::Term> terms;
  for (const auto& t : p.terms())
    if (t.monomial.degree() <= max_degree) terms.push_back(t);
  return Polynomial<F>::from_terms(field, p.nvars(), std::move(terms));
}

template <class F>
Polynomial<F> pow(const F& field, const Polynomial<F>& p, int k) {
  auto out = Polynomial<F>::constant(field, p.nvars(), field.one());
  for (int i = 0; i < k; ++i) out = mul(field, out, p);
  return out;
}

template <class F>
Polynomial<F> multiply_by_monomial(const F& field, const Polynomial<F>& p, const Monomial& m) {
  std::vector<typename Polynomial<F>::Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({t.monomial * m, t.coeff});
  return Polynomial<F>::from_terms(field, p.nvars(), std::move(terms));
}

// All monomials of degree <= N in v variables, sorted by total degree and,
// within one degree, by descending degrevlex. The index of a monomial in this
// list is its coordinate in R_N = R / m^{N+1}.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, int max_degree);

  std::size_t nvars() const noexcept { return nvars_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const Monomial& operator[](std::size_t i) const { return monomials_[i]; }

  // First index of degree d; degree_offset(N+1) == size().
  std::size_t degree_offset(int d) const { return offsets_[std::min<int>(d, max_degree_ + 1)]; }
  std::size_t count_in_degree(int d) const { return degree_offset(d + 1) - degree_offset(d); }

  // Index of m, or -1 if deg m > N.
  std::int64_t index_of(const Monomial& m) const {
    if (m.degree() > max_degree_) return -1;
    auto it = index_.find(m);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

 private:
  std::size_t nvars_;
  int max_degree_;
  std::vector<Monomial> monomials_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<Monomial, std::uint32_t, MonomialHash> index_;
};

std::size_t binomial(std::size_t n, std::size_t k);

// The ring R = k[[x_1..x_v]] together with a default truncation degree N.
// Immutable after construction; the basis cache is internally synchronized.
template <class F>
class RingContext {
 public:
  using Element = typename F::Element;
  using Poly = Polynomial<F>;

  RingContext(F field, std::vector<std::string> names, int truncation)
      : field_(std::move(field)), names_(std::move(names)), truncation_(truncation) {
    if (truncation_ < 1) throw InputError("truncation degree must be >= 1");
    if (names_.empty()) throw InputError("ring needs at least one variable");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
        throw InputError("invalid variable name '" + n + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[j] == n) throw InputError("duplicate variable name '" + n + "'");
    }
  }

  const F& field() const noexcept { return field_; }
  std::size_t nvars() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  int truncation() const noexcept { return truncation_; }

  int variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  Poly zero() const { return Poly(nvars()); }
  Poly one() const { return Poly::constant(field_, nvars(), field_.one()); }
  Poly constant(std::int64_t c) const { return Poly::constant(field_, nvars(), field_.from_int(c)); }
  Poly variable(std::size_t i) const {
    return Poly::monomial(field_, Monomial::variable(nvars(), i), field_.one());
  }

  std::shared_ptr<const MonomialBasis> basis(int max_degree) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& slot = basis_cache_[max_degree];
    if (!slot) slot = std::make_shared<const MonomialBasis>(nvars(), max_degree);
    return slot;
  }

  // dim_k R_N = C(N + v, v).
  std::size_t truncated_dim(int max_degree) const { return binomial(max_degree + nvars(), nvars()); }

 private:
  F field_;
  std::vector<std::string> names_;
  int truncation_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, std::shared_ptr<const MonomialBasis>> basis_cache_;
};

template <class F>
using RingPtr = std::shared_ptr<const RingContext<F>>;

template <class F>
RingPtr<F> make_ring(F field, std::vector<std::string> names, int truncation) {
  return std::make_shared<const RingContext<F>>(std::move(field), std::move(names), truncation);
}

// p*q with every term of degree > N discarded.
template <class F>
Polynomial<F> mul_trunc(const Polynomial<F>& p, const Polynomial<F>& q, const RingContext<F>& ctx, int max_degree) {
  if (p.nvars() != ctx.nvars() || q.nvars() != ctx.nvars()) throw ArityMismatch("mul_trunc operands");
  return detail::multiply_bounded(ctx.field(), p, q, max_degree);
}

template <class F>
Polynomial<F> mul_trunc(const Polynomial<F>& p, const Polynomial<F>& q, const RingContext<F>& ctx) {
  return mul_trunc(p, q, ctx, ctx.truncation());
}

template <class F>
linalg::Vector<F> to_vector(const Polynomial<F>& p, const RingContext<F>& ctx, int max_degree) {
  if (p.nvars() != ctx.nvars()) throw ArityMismatch("to_vector operand");
  if (p.degree() > max_degree)
    throw TruncationOverflow("degree " + std::to_string(p.degree()) + " exceeds truncation " +
                             std::to_string(max_degree));
  const auto basis = ctx.basis(max_degree);
  linalg::Vector<F> v(basis->size(), ctx.field().zero());
  for (const auto& t : p.terms()) v[static_cast<std::size_t>(basis->index_of(t.monomial))] = t.coeff;
  return v;
}

template <class F>
linalg::Vector<F> to_vector(const Polynomial<F>& p, const RingContext<F>& ctx) {
  return to_vector(p, ctx, ctx.truncation());
}

template <class F>
Polynomial<F> from_vector(const linalg::Vector<F>& v, const RingContext<F>& ctx, int max_degree) {
  const auto basis = ctx.basis(max_degree);
  if (v.size() != basis->size()) throw DimensionMismatch("from_vector length differs from dim R_N");
  std::vector<typename Polynomial<F>::Term> terms;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!ctx.field().is_zero(v[i])) terms.push_back({(*basis)[i], v[i]});
  return Polynomial<F>::from_terms(ctx.field(), ctx.nvars(), std::move(terms));
}

template <class F>
Polynomial<F> from_vector(const linalg::Vector<F>& v, const RingContext<F>& ctx) {
  return from_vector(v, ctx, ctx.truncation());
}

// Sparse coordinates of shift*p in the basis, dropping terms beyond its degree.
// `column` maps a basis index to an ambient column (identity for ideals,
// component offsets for free modules).
template <class F, class ColumnMap>
linalg::SparseVector<F> sparse_coordinates(const F& field, const Polynomial<F>& p, const MonomialBasis& basis,
                                           const Monomial& shift, ColumnMap&& column) {
  linalg::SparseVector<F> v;
  for (const auto& t : p.terms()) {
    if (t.monomial.degree() + shift.degree() > basis.max_degree()) continue;
    const auto idx = basis.index_of(t.monomial * shift);
    v.index.push_back(static_cast<std::uint32_t>(column(static_cast<std::size_t>(idx))));
    v.value.push_back(t.coeff);
  }
  linalg::canonicalize(field, v);
  return v;
}

template <class F>
linalg::SparseVector<F> sparse_coordinates(const F& field, const Polynomial<F>& p, const MonomialBasis& basis) {
  return sparse_coordinates(field, p, basis, Monomial(p.nvars()), [](std::size_t i) { return i; });
}

// ---------------------------------------------------------------------------
// Text form. Grammar:
//   poly   := [sign] term { sign term }
//   term   := factor { '*' factor }
//   factor := INT [ '/' INT ] | NAME [ '^' INT ]      (exponent >= 1)
// Whitespace is ignored between tokens.

template <class F>
class PolyParser {
 public:
  PolyParser(std::string_view text, const RingContext<F>& ctx) : s_(text), ctx_(ctx) {}

  Polynomial<F> parse() {
    const F& field = ctx_.field();
    std::vector<typename Polynomial<F>::Term> terms;
    skip_ws();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    while (true) {
      auto term = parse_term();
      if (negative) term.coeff = field.neg(term.coeff);
      terms.push_back(std::move(term));
      skip_ws();
      if (pos_ == s_.size()) break;
      if (peek() != '+' && peek() != '-') throw ParseError(std::string("unexpected character '") + peek() + "'", pos_);
      negative = peek() == '-';
      ++pos_;
    }
    return Polynomial<F>::from_terms(field, ctx_.nvars(), std::move(terms));
  }

 private:
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view read_digits() {
    const auto start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  typename Polynomial<F>::Term parse_term() {
    const F& field = ctx_.field();
    typename Polynomial<F>::Term term{Monomial(ctx_.nvars()), field.one()};
    while (true) {
      skip_ws();
      if (pos_ == s_.size()) throw ParseError("expected a factor", pos_);
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        auto value = field.from_decimal(read_digits());
        skip_ws();
        if (pos_ < s_.size() && peek() == '/') {
          ++pos_;
          skip_ws();
          const auto at = pos_;
          auto digits = read_digits();
          if (digits.empty()) throw ParseError("expected a denominator", at);
          auto den = field.from_decimal(digits);
          if (field.is_zero(den)) throw ParseError("zero denominator", at);
          value = field.div(value, den);
        }
        term.coeff = field.mul(term.coeff, value);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const auto start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        const auto name = s_.substr(start, pos_ - start);
        const int var = ctx_.variable_index(name);
        if (var < 0) throw ParseError("unknown variable '" + std::string(name) + "'", start);
        int power = 1;
        skip_ws();
        if (pos_ < s_.size() && peek() == '^') {
          ++pos_;
          skip_ws();
          const auto at = pos_;
          auto digits = read_digits();
          if (digits.empty()) throw ParseError("expected an exponent", at);
          if (digits.size() > 5) throw ParseError("exponent too large", at);
          power = std::stoi(std::string(digits));
          if (power < 1) throw ParseError("exponent must be >= 1", at);
        }
        term.monomial = term.monomial * Monomial::variable(ctx_.nvars(), static_cast<std::size_t>(var), power);
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
      }
      skip_ws();
      if (pos_ < s_.size() && peek() == '*') {
        ++pos_;
        continue;
      }
      return term;
    }
  }

  std::string_view s_;
  const RingContext<F>& ctx_;
  std::size_t pos_ = 0;
};

template <class F>
Polynomial<F> parse_poly(std::string_view text, const RingContext<F>& ctx) {
  return PolyParser<F>(text, ctx).parse();
}

inline std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

template <class F>
std::string to_string(const Polynomial<F>& p, const RingContext<F>& ctx) {
  if (p.is_zero()) return "0";
  const F& field = ctx.field();
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool negative = field.is_negative_repr(t.coeff);
    const auto magnitude = negative ? field.neg(t.coeff) : t.coeff;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const auto mono = monomial_to_string(t.monomial, ctx.names());
    if (mono.empty()) {
      out += field.to_string(magnitude);
    } else if (field.is_one(magnitude)) {
      out += mono;
    } else {
      out += field.to_string(magnitude) + "*" + mono;
    }
  }
  return out;
}

}  // namespace liftsys::ring

#endif  // LIFTSYS_RING_HPP
