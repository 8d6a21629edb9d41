#include "liftsys/growth.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "liftsys/errors.hpp"

namespace liftsys::growth {

namespace {

// Points with n >= this index enter the log-log fit; the first values of
// Hilbert-type sequences are dominated by lower-order terms.
constexpr std::size_t kFirstFitIndex = 3;

struct LogFit {
  double slope = 0.0;
  double residual = 0.0;
};

// Least squares for log v = k log n + c, optionally with a gamma / n term.
LogFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys, bool inverse_term) {
  const Eigen::Index cols = inverse_term ? 3 : 2;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), cols);
  Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t r = 0; r < xs.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    a(row, 0) = std::log(xs[r]);
    a(row, 1) = 1.0;
    if (inverse_term) a(row, 2) = 1.0 / xs[r];
    b(row) = ys[r];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd err = a * coef - b;
  return {coef(0), std::sqrt(err.squaredNorm() / static_cast<double>(xs.size()))};
}

// The 1/n column absorbs most of the bias lower-order terms put on a plain
// slope at small n. It is kept only when it at least halves the residual;
// on sequences that merely oscillate inside a band it overfits the wobble.
LogFit fit_log_log(const Sequence& seq) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::size_t n = i + 1;
    if (n < kFirstFitIndex || seq[i] <= 0) continue;
    xs.push_back(static_cast<double>(n));
    ys.push_back(std::log(static_cast<double>(seq[i])));
  }
  if (xs.size() < 2) return {};
  const auto plain = least_squares(xs, ys, false);
  if (xs.size() < 4) return plain;
  const auto corrected = least_squares(xs, ys, true);
  return corrected.residual <= 0.5 * plain.residual ? corrected : plain;
}

bool tail_is_zero(const Sequence& s, std::size_t window) {
  if (s.size() < window) return false;
  for (std::size_t i = s.size() - window; i < s.size(); ++i)
    if (s[i] != 0) return false;
  return true;
}

}  // namespace

Sequence finite_differences(const Sequence& seq, int k) {
  if (k < 0 || (k > 0 && static_cast<std::size_t>(k) >= seq.size()))
    throw InputError("finite_differences order " + std::to_string(k) + " needs a longer sequence");
  Sequence cur = seq;
  for (int step = 0; step < k; ++step) {
    Sequence next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) next[i] = cur[i + 1] - cur[i];
    cur = std::move(next);
  }
  return cur;
}

GrowthReport growth_degree(const Sequence& seq, int window) {
  if (window < 1) throw InputError("growth window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  if (seq.size() < w + 3)
    throw InputError("growth_degree needs at least " + std::to_string(w + 3) + " values, got " +
                     std::to_string(seq.size()));
  GrowthReport report;
  report.sequence = seq;
  report.window = window;

  const bool eventually_zero = tail_is_zero(seq, w);
  if (eventually_zero) {
    report.fd_degree = -1;
  } else {
    Sequence diff = seq;
    for (int k = 0; diff.size() >= w + 1; ++k) {
      Sequence next = finite_differences(diff, 1);
      if (tail_is_zero(next, w) && diff.back() != 0) {
        report.fd_degree = k;
        break;
      }
      diff = std::move(next);
    }
  }

  if (eventually_zero) {
    report.loglog_degree = -1;
  } else {
    const auto fit = fit_log_log(seq);
    report.loglog_slope = fit.slope;
    report.loglog_residual = fit.residual;
    report.loglog_degree = static_cast<int>(std::lround(fit.slope));
  }
  report.agreement = report.fd_degree.has_value() && *report.fd_degree == report.loglog_degree;
  report.degree = report.loglog_degree;
  return report;
}

}  // namespace liftsys::growth
