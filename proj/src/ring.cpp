#include "liftsys/ring.hpp"

namespace liftsys::ring {

namespace {

void enumerate_degree(std::size_t nvars, int degree, std::size_t var, std::vector<Monomial::Exponent>& exps,
                      std::vector<Monomial>& out) {
  if (var + 1 == nvars) {
    exps[var] = static_cast<Monomial::Exponent>(degree);
    out.emplace_back(exps);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    exps[var] = static_cast<Monomial::Exponent>(e);
    enumerate_degree(nvars, degree - e, var + 1, exps, out);
  }
  exps[var] = 0;
}

}  // namespace

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MonomialBasis::MonomialBasis(std::size_t nvars, int max_degree) : nvars_(nvars), max_degree_(max_degree) {
  if (max_degree < 0) throw InputError("basis degree must be nonnegative");
  if (max_degree > std::numeric_limits<Monomial::Exponent>::max())
    throw ExponentOverflow("basis degree " + std::to_string(max_degree));
  const std::size_t total = binomial(static_cast<std::size_t>(max_degree) + nvars, nvars);
  if (total > (std::size_t{1} << 31)) throw CapExceeded("basis_size", "dim R_N = " + std::to_string(total));
  monomials_.reserve(total);
  offsets_.reserve(static_cast<std::size_t>(max_degree) + 2);
  std::vector<Monomial::Exponent> exps(nvars, 0);
  for (int d = 0; d <= max_degree; ++d) {
    offsets_.push_back(monomials_.size());
    const auto first = monomials_.size();
    enumerate_degree(nvars, d, 0, exps, monomials_);
    std::sort(monomials_.begin() + static_cast<std::ptrdiff_t>(first), monomials_.end(), degrevlex_greater);
  }
  offsets_.push_back(monomials_.size());
  index_.reserve(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], static_cast<std::uint32_t>(i));
}

}  // namespace liftsys::ring
