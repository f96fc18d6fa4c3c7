#include "gompcert/gomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gompcert/errors.hpp"

namespace gompcert {

namespace {

IndexSet sorted_unique(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool contains(const IndexSet& sorted, std::size_t i) {
  return std::binary_search(sorted.begin(), sorted.end(), i);
}

Vector abs_correlations(const SensingMatrix& a, std::span<const double> r) {
  Vector c = a.matrix().apply_transpose(r);
  for (double& v : c) v = std::abs(v);
  return c;
}

}  // namespace

TiePolicy TiePolicy::adversarial(IndexSet avoid) {
  if (avoid.empty()) throw InvalidArgument("adversarial tie policy needs a non-empty avoid set");
  return TiePolicy(Kind::kAdversarial, sorted_unique(std::move(avoid)));
}

bool TiePolicy::avoids(std::size_t index) const {
  return kind_ == Kind::kAdversarial && contains(avoid_, index);
}

std::string TiePolicy::name() const {
  return kind_ == Kind::kLexicographic ? "lexicographic" : "adversarial";
}

IndexSet identify(std::span<const double> magnitudes, std::size_t N,
                  const TiePolicy& policy) {
  if (N == 0 || N > magnitudes.size()) {
    throw InvalidArgument("identify: N must be in [1, " +
                          std::to_string(magnitudes.size()) + "]");
  }
  for (std::size_t i : policy.avoid_set()) {
    if (i >= magnitudes.size()) throw InvalidArgument("avoid set index out of range");
  }

  std::vector<std::size_t> order(magnitudes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return magnitudes[l] > magnitudes[r];
  });
  const double boundary = magnitudes[order[N - 1]];

  IndexSet chosen;
  std::vector<std::size_t> tied;
  for (std::size_t i : order) {
    if (magnitudes[i] > boundary + kTieTolerance) {
      chosen.push_back(i);
    } else if (magnitudes[i] >= boundary - kTieTolerance) {
      tied.push_back(i);
    }
  }
  std::sort(tied.begin(), tied.end(), [&](std::size_t l, std::size_t r) {
    const bool la = policy.avoids(l);
    const bool ra = policy.avoids(r);
    if (la != ra) return !la;
    return l < r;
  });
  for (std::size_t i = 0; chosen.size() < N; ++i) chosen.push_back(tied[i]);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

SelectionMargins selection_margins(const SensingMatrix& a, std::span<const double> r,
                                   const IndexSet& true_support,
                                   const IndexSet& current_estimate, std::size_t N) {
  const std::size_t n = a.cols();
  const IndexSet t = sorted_unique(true_support);
  const IndexSet lambda = sorted_unique(current_estimate);
  const Vector corr = abs_correlations(a, r);

  std::optional<double> beta1;
  Vector outside;
  for (std::size_t i = 0; i < n; ++i) {
    const bool in_t = contains(t, i);
    const bool in_l = contains(lambda, i);
    if (in_t && !in_l) beta1 = std::max(beta1.value_or(0.0), corr[i]);
    if (!in_t && !in_l) outside.push_back(corr[i]);
  }
  if (!beta1) throw EmptyCandidateSet("T \\ Lambda is empty");
  if (N == 0 || outside.size() < N) {
    throw EmptyCandidateSet("fewer than N columns outside T u Lambda");
  }
  std::nth_element(outside.begin(), outside.begin() + static_cast<std::ptrdiff_t>(N - 1),
                   outside.end(), std::greater<>());
  return {*beta1, outside[N - 1]};
}

std::string to_string(Termination t) {
  return t == Termination::kResidualBelowEpsilon ? "residual_below_epsilon"
                                                 : "iteration_cap";
}

Vector RecoveryResult::signal(std::size_t n) const {
  Vector x(n, 0.0);
  for (std::size_t j = 0; j < estimated_support.size(); ++j) {
    x.at(estimated_support[j]) = coefficients[j];
  }
  return x;
}

double iteration_cap(std::size_t m, std::size_t K) {
  return std::min(static_cast<double>(K), static_cast<double>(m) / static_cast<double>(K));
}

RecoveryResult gomp_recover(const SensingMatrix& a, std::span<const double> y,
                            const GompParams& params) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t K = params.K;
  const std::size_t N = params.N;
  if (K == 0 || N == 0) throw InvalidArgument("K and N must be >= 1");
  if (N > K) throw InvalidArgument("N must not exceed K");
  if (N * K > m) throw InvalidArgument("N must not exceed m/K");
  if (N > n) throw InvalidArgument("N must not exceed the number of columns");
  if (y.size() != m) throw DimensionMismatch("y length does not match the row count");
  if (!(params.epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  for (std::size_t i : params.policy.avoid_set()) {
    if (i >= n) throw InvalidArgument("avoid set index out of range");
  }
  std::optional<IndexSet> truth;
  if (params.true_support) {
    truth = sorted_unique(*params.true_support);
    if (!truth->empty() && truth->back() >= n) {
      throw InvalidArgument("true support index out of range");
    }
  }

  const double cap = iteration_cap(m, K);
  const double zero_level = kZeroResidualFraction * norm2(y);
  auto keep_going = [&](double rnorm, std::size_t k) {
    return rnorm > params.epsilon && rnorm > zero_level && static_cast<double>(k) < cap;
  };

  RecoveryResult result;
  Vector r(y.begin(), y.end());
  double rnorm = norm2(r);
  std::size_t k = 0;
  IndexSet lambda;

  while (keep_going(rnorm, k)) {
    ++k;
    IterationRecord rec;
    rec.correlations = abs_correlations(a, r);

    if (truth) {
      try {
        const SelectionMargins sm = selection_margins(a, r, *truth, lambda, N);
        rec.beta1 = sm.beta1;
        rec.alphaN = sm.alphaN;
      } catch (const EmptyCandidateSet&) {
        // Margins are undefined once T is covered; leave them absent.
      }
    }

    rec.selected = identify(rec.correlations, N, params.policy);
    IndexSet merged;
    std::set_union(lambda.begin(), lambda.end(), rec.selected.begin(),
                   rec.selected.end(), std::back_inserter(merged));
    lambda = std::move(merged);

    const HouseholderQR qr(a.matrix().select_columns(lambda));
    result.coefficients = qr.solve(y);
    r = qr.residual(y);
    rnorm = norm2(r);
    rec.residual_norm_after = rnorm;
    result.iterations.push_back(std::move(rec));
  }

  result.estimated_support = std::move(lambda);
  result.final_residual_norm = rnorm;
  result.termination = (rnorm <= params.epsilon || rnorm <= zero_level)
                           ? Termination::kResidualBelowEpsilon
                           : Termination::kIterationCap;
  return result;
}

}  // namespace gompcert
