#ifndef LIFTSYS_KOSZUL_HPP
#define LIFTSYS_KOSZUL_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftsys/errors.hpp"
#include "liftsys/fitting.hpp"
#include "liftsys/ideals.hpp"
#include "liftsys/lifting.hpp"
#include "liftsys/linalg.hpp"
#include "liftsys/parallel.hpp"
#include "liftsys/sparse_echelon.hpp"

namespace liftsys::koszul {

using fitting::ModuleVectorSpace;
using fitting::PresentedModule;
using ideals::Ideal;
using ideals::Poly;
using lifting::LiftingSystem;

inline constexpr int kStabilizationWindow = 3;

// ---------------------------------------------------------------------------
// Regular sequences

enum class RegularityStamp { Regular, Uncertified };

inline const char* to_string(RegularityStamp s) { return s == RegularityStamp::Regular ? "REGULAR" : "UNCERTIFIED"; }

struct RegularityReport {
  RegularityStamp stamp = RegularityStamp::Uncertified;
  int ambient_dim = 0;
  int quotient_dim = 0;
  int length = 0;
};

// In the regular ambient k[[x]], g_1..g_d in m is regular iff
// dim R/(g) = dim R - d.
template <class F>
RegularityReport regular_sequence_certificate(const ring::RingPtr<F>& r, const std::vector<Poly<F>>& gens,
                                              int horizon = ideals::kGrowthHorizon) {
  for (const auto& g : gens)
    if (g.is_zero() || g.order() == 0) throw InputError("regular sequence elements must be nonzero and lie in m");
  RegularityReport out;
  out.ambient_dim = static_cast<int>(r->nvars());
  out.length = static_cast<int>(gens.size());
  out.quotient_dim = ideals::hs_dimension(Ideal<F>(r, gens), horizon).dim;
  out.stamp = out.quotient_dim == out.ambient_dim - out.length ? RegularityStamp::Regular : RegularityStamp::Uncertified;
  return out;
}

// ---------------------------------------------------------------------------
// Koszul complexes on a finite-length module

// Size-k subsets of {0..d-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> lex_subsets(std::size_t d, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t t = start; t < d; ++t) {
      cur.push_back(t);
      self(self, t + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// K_i = V^{C(d,i)} with basis e_T (T in lex order), and
//   d(e_T (x) v) = sum_{t in T} (-1)^{position of t in T} e_{T \ t} (x) g_t v.
template <class F>
class KoszulComplex {
 public:
  KoszulComplex(std::shared_ptr<const ModuleVectorSpace<F>> module, std::vector<Poly<F>> gens)
      : module_(std::move(module)), gens_(std::move(gens)) {
    const auto& f = module_->field();
    const std::size_t d = gens_.size();
    const std::size_t dim = module_->dim();
    std::vector<linalg::DenseMatrix<F>> actions;
    for (const auto& g : gens_) actions.push_back(module_->action(g));
    for (std::size_t k = 0; k <= d; ++k) subsets_.push_back(lex_subsets(d, k));
    differentials_.emplace_back(f, 0, 0);
    for (std::size_t i = 1; i <= d; ++i) {
      const auto& targets = subsets_[i - 1];
      linalg::DenseMatrix<F> m(f, targets.size() * dim, subsets_[i].size() * dim);
      for (std::size_t col_block = 0; col_block < subsets_[i].size(); ++col_block) {
        const auto& subset = subsets_[i][col_block];
        for (std::size_t pos = 0; pos < subset.size(); ++pos) {
          auto face = subset;
          face.erase(face.begin() + static_cast<std::ptrdiff_t>(pos));
          const auto row_block =
              static_cast<std::size_t>(std::lower_bound(targets.begin(), targets.end(), face) - targets.begin());
          const auto& a = actions[subset[pos]];
          for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
              const auto v = pos % 2 == 0 ? a(r, c) : f.neg(a(r, c));
              m(row_block * dim + r, col_block * dim + c) = v;
            }
        }
      }
      differentials_.push_back(std::move(m));
    }
    for (std::size_t i = 1; i < d; ++i)
      if (!linalg::multiply(f, differentials_[i], differentials_[i + 1]).is_zero(f))
        throw AssertionFailure("Koszul differentials do not compose to zero in degree " + std::to_string(i));
  }

  const ModuleVectorSpace<F>& module() const { return *module_; }
  const std::shared_ptr<const ModuleVectorSpace<F>>& module_ptr() const { return module_; }
  const std::vector<Poly<F>>& sequence() const noexcept { return gens_; }
  std::size_t length() const noexcept { return gens_.size(); }
  std::size_t term_dim(std::size_t i) const { return i > length() ? 0 : subsets_[i].size() * module_->dim(); }
  const std::vector<std::vector<std::size_t>>& subsets(std::size_t i) const { return subsets_[i]; }

  // d_i : K_i -> K_{i-1} for 1 <= i <= length.
  const linalg::DenseMatrix<F>& differential(std::size_t i) const { return differentials_.at(i); }

 private:
  std::shared_ptr<const ModuleVectorSpace<F>> module_;
  std::vector<Poly<F>> gens_;
  std::vector<std::vector<std::vector<std::size_t>>> subsets_;
  std::vector<linalg::DenseMatrix<F>> differentials_;
};

template <class F>
struct Homology {
  std::size_t degree = 0;
  std::size_t dim = 0;
  std::size_t ambient = 0;
  linalg::Subspace<F> cycles;
  linalg::Subspace<F> boundaries;
  std::vector<linalg::Vector<F>> representatives;  // cycles completing a basis of the boundaries
};

namespace detail {

template <class F>
linalg::Subspace<F> column_span(const F& f, const linalg::DenseMatrix<F>& m) {
  if (m.cols() == 0 || m.rows() == 0) return linalg::Subspace<F>(f, m.rows());
  return linalg::Subspace<F>::span(f, m.transposed(f));
}

// dim(span(vectors) + base) - dim(base).
template <class F>
std::size_t dim_modulo(const F& f, const linalg::Subspace<F>& base, const std::vector<linalg::Vector<F>>& vectors) {
  linalg::SparseEchelon<F> ech(f, base.ambient_dim());
  for (std::size_t i = 0; i < base.dim(); ++i)
    ech.insert(linalg::SparseVector<F>::from_dense(f, base.basis_vector(i)));
  std::size_t added = 0;
  for (const auto& v : vectors) added += ech.insert(linalg::SparseVector<F>::from_dense(f, v));
  return added;
}

}  // namespace detail

template <class F>
Homology<F> homology(const KoszulComplex<F>& k, std::size_t i) {
  const auto& f = k.module().field();
  Homology<F> h;
  h.degree = i;
  h.ambient = k.term_dim(i);
  if (i > k.length()) {
    h.cycles = linalg::Subspace<F>(f, 0);
    h.boundaries = linalg::Subspace<F>(f, 0);
    return h;
  }
  h.cycles = i == 0 ? linalg::Subspace<F>::full(f, h.ambient) : linalg::kernel_basis(f, k.differential(i));
  h.boundaries = i + 1 <= k.length() ? detail::column_span(f, k.differential(i + 1)) : linalg::Subspace<F>(f, h.ambient);
  linalg::SparseEchelon<F> ech(f, h.ambient);
  for (std::size_t r = 0; r < h.boundaries.dim(); ++r)
    ech.insert(linalg::SparseVector<F>::from_dense(f, h.boundaries.basis_vector(r)));
  for (std::size_t r = 0; r < h.cycles.dim(); ++r) {
    auto v = h.cycles.basis_vector(r);
    if (ech.insert(linalg::SparseVector<F>::from_dense(f, v))) h.representatives.push_back(std::move(v));
  }
  h.dim = h.representatives.size();
  return h;
}

template <class F>
struct KoszulHomologyResult {
  std::size_t dim = 0;
  std::vector<linalg::Vector<F>> basis;
  bool is_tor = false;  // sequence certified regular, so this is Tor_i(M, R/(g))
  const char* label() const { return is_tor ? "Tor" : "Koszul homology"; }
};

template <class F>
KoszulHomologyResult<F> koszul_homology(const std::vector<Poly<F>>& gens, const PresentedModule<F>& m, std::size_t i) {
  auto v = std::make_shared<const ModuleVectorSpace<F>>(m);
  const KoszulComplex<F> k(v, gens);
  auto h = homology(k, i);
  const bool regular =
      regular_sequence_certificate(m.ring_ptr(), gens).stamp == RegularityStamp::Regular;
  return {h.dim, std::move(h.representatives), regular};
}

// ---------------------------------------------------------------------------
// Inverse systems of Tor

// Matrix of the natural surjection V_{n+1} -> V_n (both quotients of the
// same free module): standard element k of the source, reduced in the target.
template <class F>
linalg::DenseMatrix<F> surjection_matrix(const ModuleVectorSpace<F>& source, const ModuleVectorSpace<F>& target) {
  const auto& f = source.field();
  linalg::DenseMatrix<F> m(f, target.dim(), source.dim());
  for (std::size_t k = 0; k < source.dim(); ++k) {
    const auto [component, monomial] = source.standard_element(k);
    const auto image = target.project(target.generator(component), &monomial);
    for (std::size_t r = 0; r < target.dim(); ++r) m(r, k) = image[r];
  }
  return m;
}

// Applies a V-level map blockwise to an element of V^{blocks}.
template <class F>
linalg::Vector<F> apply_blockwise(const F& f, const linalg::DenseMatrix<F>& map, const linalg::Vector<F>& v,
                                  std::size_t blocks) {
  linalg::Vector<F> out(blocks * map.rows(), f.zero());
  for (std::size_t b = 0; b < blocks; ++b) {
    const linalg::Vector<F> part(v.begin() + static_cast<std::ptrdiff_t>(b * map.cols()),
                                 v.begin() + static_cast<std::ptrdiff_t>((b + 1) * map.cols()));
    const auto image = linalg::apply(f, map, part);
    std::copy(image.begin(), image.end(), out.begin() + static_cast<std::ptrdiff_t>(b * map.rows()));
  }
  return out;
}

namespace detail {

// Coordinates of each target (a cycle) in the homology basis: one RREF of
// [boundaries | representatives | targets] read off at the representative
// columns.
template <class F>
linalg::DenseMatrix<F> homology_coordinates(const F& f, const Homology<F>& h,
                                            const std::vector<linalg::Vector<F>>& targets) {
  const std::size_t b = h.boundaries.dim();
  const std::size_t reps = h.representatives.size();
  linalg::DenseMatrix<F> out(f, reps, targets.size());
  if (reps == 0 || targets.empty()) return out;
  linalg::DenseMatrix<F> system(f, h.ambient, b + reps + targets.size());
  for (std::size_t r = 0; r < h.ambient; ++r) {
    for (std::size_t c = 0; c < b; ++c) system(r, c) = h.boundaries.basis()(c, r);
    for (std::size_t c = 0; c < reps; ++c) system(r, b + c) = h.representatives[c][r];
    for (std::size_t c = 0; c < targets.size(); ++c) system(r, b + reps + c) = targets[c][r];
  }
  const auto res = linalg::rref(f, std::move(system));
  for (std::size_t i = 0; i < res.rank; ++i) {
    const auto p = res.pivots[i];
    if (p >= b + reps) throw AssertionFailure("induced map target is not a cycle modulo boundaries");
    if (p < b) continue;
    for (std::size_t c = 0; c < targets.size(); ++c) out(p - b, c) = res.reduced(i, b + reps + c);
  }
  return out;
}

}  // namespace detail

template <class F>
struct TorLevel {
  int n = 0;
  std::size_t module_dim = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> image_dims;  // image_dims[k] = dim image(H(n+k) -> H(n))
  std::size_t stable_image = 0;
  bool stabilized = false;
  std::optional<linalg::DenseMatrix<F>> induced;  // H(n+1) -> H(n) in representative bases
};

template <class F>
struct TorReport {
  std::size_t degree = 0;
  int n_max = 0;
  int window = kStabilizationWindow;
  bool regular = false;
  bool stabilized = false;
  bool tor0_constant = true;
  std::vector<TorLevel<F>> levels;
  const char* label() const { return regular ? "Tor" : "Koszul homology"; }
};

namespace detail {

template <class F>
struct TorPipeline {
  std::vector<std::shared_ptr<const ModuleVectorSpace<F>>> modules;
  std::vector<std::unique_ptr<KoszulComplex<F>>> complexes;
  std::vector<linalg::DenseMatrix<F>> surjections;  // surjections[n-1]: V_{n+1} -> V_n
};

template <class F>
TorPipeline<F> tor_pipeline(const LiftingSystem<F>& sys, int n_max) {
  if (n_max > sys.max_level())
    throw HorizonExceeded("Tor system up to n=" + std::to_string(n_max) + " needs schedule horizon " +
                          std::to_string(n_max - 1));
  for (int n = 1; n <= n_max; ++n) sys.power_generators(n);
  TorPipeline<F> p;
  const auto count = static_cast<std::size_t>(n_max);
  p.modules.resize(count);
  p.complexes.resize(count);
  parallel_for(count, [&](std::size_t idx) {
    p.modules[idx] = sys.module(static_cast<int>(idx) + 1);
    p.complexes[idx] = std::make_unique<KoszulComplex<F>>(p.modules[idx], sys.ideal().generators());
  });
  p.surjections.resize(count > 0 ? count - 1 : 0);
  parallel_for(p.surjections.size(),
               [&](std::size_t idx) { p.surjections[idx] = surjection_matrix(*p.modules[idx + 1], *p.modules[idx]); });
  return p;
}

}  // namespace detail

template <class F>
TorReport<F> tor_inverse_system(const LiftingSystem<F>& sys, std::size_t i, int n_max,
                                int window = kStabilizationWindow) {
  const auto& f = sys.field();
  const auto pipeline = detail::tor_pipeline(sys, n_max);
  const auto count = static_cast<std::size_t>(n_max);
  std::vector<Homology<F>> hs(count);
  parallel_for(count, [&](std::size_t idx) { hs[idx] = homology(*pipeline.complexes[idx], i); });
  const std::size_t blocks = lex_subsets(sys.ideal().size(), i).size();

  TorReport<F> out;
  out.degree = i;
  out.n_max = n_max;
  out.window = window;
  out.regular =
      regular_sequence_certificate(sys.ring_ptr(), sys.ideal().generators()).stamp == RegularityStamp::Regular;
  out.levels.resize(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    auto& level = out.levels[idx];
    level.n = static_cast<int>(idx) + 1;
    level.module_dim = pipeline.modules[idx]->dim();
    level.dim = hs[idx].dim;
    level.image_dims.assign(count - idx, 0);
  }
  // Push the representatives of each source level down one step at a time.
  parallel_for(count, [&](std::size_t src) {
    std::vector<linalg::Vector<F>> pushed = hs[src].representatives;
    for (std::size_t tgt = src + 1; tgt-- > 0;) {
      if (tgt < src)
        for (auto& v : pushed) v = apply_blockwise(f, pipeline.surjections[tgt], v, blocks);
      out.levels[tgt].image_dims[src - tgt] = detail::dim_modulo(f, hs[tgt].boundaries, pushed);
    }
  });
  for (std::size_t idx = 0; idx + 1 < count; ++idx) {
    std::vector<linalg::Vector<F>> images;
    for (const auto& v : hs[idx + 1].representatives)
      images.push_back(apply_blockwise(f, pipeline.surjections[idx], v, blocks));
    out.levels[idx].induced = detail::homology_coordinates(f, hs[idx], images);
  }
  bool any_window = false;
  out.stabilized = true;
  for (auto& level : out.levels) {
    level.stable_image = level.image_dims.back();
    for (std::size_t k = 1; k < level.image_dims.size(); ++k)
      if (level.image_dims[k] > level.image_dims[k - 1])
        throw AssertionFailure("composite image dimensions increased at level " + std::to_string(level.n));
    const auto w = static_cast<std::size_t>(window);
    // image_dims[0] is the identity; only proper composites count toward the window.
    if (level.image_dims.size() > w) {
      any_window = true;
      level.stabilized = std::all_of(level.image_dims.end() - static_cast<std::ptrdiff_t>(w), level.image_dims.end(),
                                     [&](std::size_t x) { return x == level.image_dims.back(); });
      out.stabilized = out.stabilized && level.stabilized;
    }
  }
  out.stabilized = out.stabilized && any_window;
  if (i == 0 && !out.levels.empty()) {
    const auto base = out.levels.front().module_dim;
    for (const auto& level : out.levels) out.tor0_constant = out.tor0_constant && level.dim == base;
  }
  // Alternating sum of homology dimensions vanishes for d >= 1.
  if (sys.ideal().size() >= 1 && i == 0) {
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::int64_t euler = 0;
      for (std::size_t deg = 0; deg <= sys.ideal().size(); ++deg) {
        const auto hd = deg == 0 ? hs[idx].dim : homology(*pipeline.complexes[idx], deg).dim;
        euler += (deg % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(hd);
      }
      if (euler != 0) throw AssertionFailure("Koszul Euler characteristic is nonzero at level " + std::to_string(idx + 1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The degree-one cycle witness for the dimension-d family

template <class F>
struct WitnessLevel {
  int n = 0;
  std::vector<std::vector<Poly<F>>> m;  // m_{n,i} in R^2 for i = 1..d
  bool identity_holds = false;          // sum g_i m_{n,i} = C(phi + sigma_1 + ... + sigma_n)
  bool is_cycle = false;                // d_1(eta_n) = 0 in K_n
  bool class_nonzero = false;           // eta_n not a boundary
  bool maps_to_previous = true;         // eta_n -> eta_{n-1} exactly under M_n -> M_{n-1}
};

template <class F>
struct CycleWitness {
  int d = 0;
  int n_max = 0;
  bool base_cycle = false;  // m_0 gives a nonzero cycle in K_1
  std::vector<WitnessLevel<F>> levels;
  static constexpr const char* trust_note =
      "certifies the given schedule; the statement for every schedule is the cited theorem";
};

namespace detail {

// C(A) = -h y_{d-1} A_{d-1} + h y_d A_d + x_d^{d-1} A_{2d-1} - x_{d-1}^{d-1} A_{2d}
// with 1-based column indices; returns an element of R^2.
template <class F>
std::vector<Poly<F>> witness_combination(const lifting::Matrix<F>& a, int d) {
  const auto& r = a.ring();
  const auto& f = a.field();
  const auto du = static_cast<std::size_t>(d);
  auto h = r.one();
  for (std::size_t i = 0; i + 2 < du; ++i) h = ring::mul(f, h, r.variable(i));
  const auto xd = ring::pow(f, r.variable(du - 1), d - 1);
  const auto xd1 = ring::pow(f, r.variable(du - 2), d - 1);
  const auto c1 = ring::neg(f, ring::mul(f, h, r.variable(2 * du - 2)));
  const auto c2 = ring::mul(f, h, r.variable(2 * du - 1));
  const auto c3 = xd;
  const auto c4 = ring::neg(f, xd1);
  std::vector<Poly<F>> out;
  for (std::size_t row = 0; row < 2; ++row) {
    auto v = ring::mul(f, c1, a.at(row, du - 2));
    v = ring::add(f, v, ring::mul(f, c2, a.at(row, du - 1)));
    v = ring::add(f, v, ring::mul(f, c3, a.at(row, 2 * du - 2)));
    v = ring::add(f, v, ring::mul(f, c4, a.at(row, 2 * du - 1)));
    out.push_back(std::move(v));
  }
  return out;
}

template <class F>
int match_obstruction_template(const LiftingSystem<F>& sys) {
  const auto nvars = sys.ring().nvars();
  if (nvars < 4 || nvars % 2 != 0) throw TemplateMismatch("the ring must have 2d variables with d >= 2");
  const int d = static_cast<int>(nvars / 2);
  const auto expected_phi = lifting::obstruction_family_matrix(sys.ring_ptr(), d);
  if (!sys.base().equals(expected_phi)) throw TemplateMismatch("base matrix is not the dimension-d family matrix");
  const auto expected_a = lifting::obstruction_family_ideal(sys.ring_ptr(), d);
  const auto& gens = sys.ideal().generators();
  if (gens.size() != expected_a.size()) throw TemplateMismatch("ideal must have d generators x_i^d + y_i^d");
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!gens[i].equals(sys.field(), expected_a.generators()[i]))
      throw TemplateMismatch("ideal generator " + std::to_string(i + 1) + " is not x_i^d + y_i^d");
  return d;
}

template <class F>
linalg::Vector<F> koszul_one_vector(const ModuleVectorSpace<F>& v, const std::vector<std::vector<Poly<F>>>& m) {
  linalg::Vector<F> out;
  for (const auto& part : m) {
    const auto coords = v.project(part);
    out.insert(out.end(), coords.begin(), coords.end());
  }
  return out;
}

}  // namespace detail

// Builds m_0, ..., m_{n_max} from the schedule parts and checks, for each
// 1 <= n <= n_max, the exact identity, the cycle condition and nonvanishing
// of the class in K_n, and eta_n -> eta_{n-1}. Any failure contradicts the
// underlying lemma and is raised as AssertionFailure.
template <class F>
CycleWitness<F> eta_witness(const LiftingSystem<F>& sys, int n_max) {
  const int d = detail::match_obstruction_template(sys);
  if (n_max > sys.horizon())
    throw HorizonExceeded("the witness at level " + std::to_string(n_max) + " needs sigma_" + std::to_string(n_max) +
                          " (schedule horizon " + std::to_string(sys.horizon()) + ")");
  const auto& f = sys.field();
  const auto& r = sys.ring();
  const auto du = static_cast<std::size_t>(d);
  auto h = r.one();
  for (std::size_t i = 0; i + 2 < du; ++i) h = ring::mul(f, h, r.variable(i));

  std::vector<std::vector<std::vector<Poly<F>>>> ms;
  std::vector<std::vector<Poly<F>>> m0(du, std::vector<Poly<F>>(2, r.zero()));
  m0[du - 2][1] = ring::neg(f, h);
  m0[du - 1][1] = h;
  ms.push_back(m0);
  for (int n = 1; n <= n_max; ++n) {
    auto next = ms.back();
    const auto& parts = sys.schedule().parts[static_cast<std::size_t>(n - 1)];
    if (!parts) {
      if (!lifting::matrix_is_zero(sys.schedule().totals[static_cast<std::size_t>(n - 1)]))
        throw InputError("the witness needs the decomposition sigma_n = sum sigma_{n,i} g_i at level " +
                         std::to_string(n));
    } else {
      for (std::size_t i = 0; i < du; ++i) {
        const auto correction = detail::witness_combination((*parts)[i], d);
        for (std::size_t row = 0; row < 2; ++row) next[i][row] = ring::add(f, next[i][row], correction[row]);
      }
    }
    ms.push_back(std::move(next));
  }

  const auto pipeline = detail::tor_pipeline(sys, n_max);
  CycleWitness<F> out;
  out.d = d;
  out.n_max = n_max;
  std::vector<Homology<F>> hs(static_cast<std::size_t>(n_max));
  parallel_for(hs.size(), [&](std::size_t idx) { hs[idx] = homology(*pipeline.complexes[idx], 1); });

  auto is_nonzero_cycle = [&](std::size_t idx, const linalg::Vector<F>& eta, bool& cycle, bool& nonzero) {
    const auto boundary = linalg::apply(f, pipeline.complexes[idx]->differential(1), eta);
    cycle = linalg::is_zero_vector(f, boundary);
    nonzero = cycle && !hs[idx].boundaries.contains(f, eta);
  };

  if (n_max >= 1) {
    bool cycle = false, nonzero = false;
    is_nonzero_cycle(0, detail::koszul_one_vector(*pipeline.modules[0], ms[0]), cycle, nonzero);
    out.base_cycle = cycle && nonzero;
    if (!out.base_cycle) throw AssertionFailure("m_0 is not a nonzero cycle in K_1");
  }
  std::vector<linalg::Vector<F>> etas;
  for (int n = 1; n <= n_max; ++n) {
    const auto idx = static_cast<std::size_t>(n - 1);
    WitnessLevel<F> level;
    level.n = n;
    level.m = ms[static_cast<std::size_t>(n)];
    auto lhs = std::vector<Poly<F>>(2, r.zero());
    const auto& g = sys.ideal().generators();
    for (std::size_t i = 0; i < du; ++i)
      for (std::size_t row = 0; row < 2; ++row) lhs[row] = ring::add(f, lhs[row], ring::mul(f, g[i], level.m[i][row]));
    const auto rhs = detail::witness_combination(sys.perturbed(n + 1), d);
    level.identity_holds = lhs[0].equals(f, rhs[0]) && lhs[1].equals(f, rhs[1]);
    etas.push_back(detail::koszul_one_vector(*pipeline.modules[idx], level.m));
    is_nonzero_cycle(idx, etas.back(), level.is_cycle, level.class_nonzero);
    if (n >= 2) {
      const auto image = apply_blockwise(f, pipeline.surjections[idx - 1], etas[idx], du);
      level.maps_to_previous = image == etas[idx - 1];
    }
    std::string failure;
    if (!level.identity_holds) failure += " identity";
    if (!level.is_cycle) failure += " cycle";
    if (!level.class_nonzero) failure += " nonzero-class";
    if (!level.maps_to_previous) failure += " compatibility";
    if (!failure.empty())
      throw AssertionFailure("cycle witness fails at n=" + std::to_string(n) + ":" + failure);
    out.levels.push_back(std::move(level));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Depth certificates

enum class DepthStamp { UnliftableWitnessed, StabilizedZero, NonzeroStableImage, NotStabilized };

inline const char* to_string(DepthStamp s) {
  switch (s) {
    case DepthStamp::UnliftableWitnessed: return "UNLIFTABLE-WITNESSED";
    case DepthStamp::StabilizedZero: return "STABILIZED-ZERO";
    case DepthStamp::NonzeroStableImage: return "NONZERO-STABLE-IMAGE";
    case DepthStamp::NotStabilized: return "NOT-STABILIZED";
  }
  return "?";
}

template <class F>
struct AuslanderCertificate {
  int pdim = 0;  // d = length of the regular sequence
  int q = 0;
  int depth_bound = 0;
  int n_max = 0;
  DepthStamp stamp = DepthStamp::NotStabilized;
  bool witnessed = false;
  std::vector<TorReport<F>> tor;
  std::string caveat;
};

// depth lim M_n = d - q with q the top degree whose stable image at level 1
// is nonzero, read through the inverse-limit Tor isomorphism.
template <class F>
AuslanderCertificate<F> depth_certificate_auslander(const LiftingSystem<F>& sys, int n_max,
                                                    int window = kStabilizationWindow) {
  if (regular_sequence_certificate(sys.ring_ptr(), sys.ideal().generators()).stamp != RegularityStamp::Regular)
    throw InputError("the generators of a are not certified to form a regular sequence");
  AuslanderCertificate<F> out;
  out.pdim = static_cast<int>(sys.ideal().size());
  out.n_max = n_max;
  bool stabilized = true;
  for (std::size_t i = 0; i <= sys.ideal().size(); ++i) {
    out.tor.push_back(tor_inverse_system(sys, i, n_max, window));
    const auto& rep = out.tor.back();
    stabilized = stabilized && rep.stabilized;
    if (rep.levels.front().stable_image > 0) out.q = static_cast<int>(i);
  }
  out.depth_bound = out.pdim - out.q;
  if (out.q >= 1) {
    try {
      eta_witness(sys, std::min(n_max, sys.horizon()));
      out.witnessed = true;
    } catch (const TemplateMismatch&) {
    } catch (const HorizonExceeded&) {
    }
  }
  if (out.witnessed) {
    out.stamp = DepthStamp::UnliftableWitnessed;
    out.caveat = "nonzero inverse-limit class witnessed by compatible cycles";
  } else if (!stabilized) {
    out.stamp = DepthStamp::NotStabilized;
    out.caveat = "composite images did not stabilize within n <= " + std::to_string(n_max);
  } else if (out.q == 0) {
    out.stamp = DepthStamp::StabilizedZero;
    out.caveat = "stable images vanish for i >= 1 up to n = " + std::to_string(n_max) + "; supports, not proves, a zero limit";
  } else {
    out.stamp = DepthStamp::NonzeroStableImage;
    out.caveat = "nonzero stable image up to n = " + std::to_string(n_max) + " without a compatible cycle witness";
  }
  return out;
}

enum class DeterminantStamp { Exact, ZeroModule, Inconclusive };

inline const char* to_string(DeterminantStamp s) {
  switch (s) {
    case DeterminantStamp::Exact: return "EXACT";
    case DeterminantStamp::ZeroModule: return "ZERO-MODULE";
    case DeterminantStamp::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

template <class F>
struct DeterminantCertificate {
  Poly<F> determinant;
  std::optional<int> depth;
  DeterminantStamp stamp = DeterminantStamp::Inconclusive;
  // ord(det) < (J+1) ord(a): the untruncated lift has a nonzero determinant too.
  std::optional<bool> limit_certified;
};

// For square Phi with det != 0 over the regular ambient of dimension v:
// 0 -> R^mu -> R^mu -> coker -> 0 is exact, so depth coker = v - 1.
template <class F>
DeterminantCertificate<F> depth_certificate_determinant(const PresentedModule<F>& phi,
                                                        std::optional<int> horizon = std::nullopt,
                                                        std::optional<int> ideal_order = std::nullopt) {
  if (phi.rows() != phi.cols() || phi.rows() == 0) throw DimensionMismatch("determinant certificate needs a square matrix");
  DeterminantCertificate<F> out{fitting::minors(phi, phi.rows()).front(), std::nullopt, DeterminantStamp::Inconclusive,
                                std::nullopt};
  if (out.determinant.is_zero()) return out;
  if (out.determinant.order() == 0) {
    out.stamp = DeterminantStamp::ZeroModule;
    return out;
  }
  out.stamp = DeterminantStamp::Exact;
  out.depth = static_cast<int>(phi.ring().nvars()) - 1;
  if (horizon && ideal_order) out.limit_certified = out.determinant.order() < (*horizon + 1) * *ideal_order;
  return out;
}

}  // namespace liftsys::koszul

#endif  // LIFTSYS_KOSZUL_HPP
