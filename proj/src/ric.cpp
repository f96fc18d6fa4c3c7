#include "gompcert/ric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <thread>
#include <utility>

#include "gompcert/errors.hpp"

namespace gompcert {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (!std::isfinite(c)) return std::numeric_limits<double>::infinity();
  }
  return std::round(c);
}

namespace {

std::uint64_t binom_u64(std::size_t n, std::size_t k) {
  return static_cast<std::uint64_t>(binomial(n, k));
}

// Lexicographic rank -> k-subset of {0..n-1}.
IndexSet unrank(std::uint64_t rank, std::size_t n, std::size_t k) {
  IndexSet s(k);
  std::size_t next = 0;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = next;; ++i) {
      const std::uint64_t block = binom_u64(n - 1 - i, k - 1 - j);
      if (rank < block) {
        s[j] = i;
        next = i + 1;
        break;
      }
      rank -= block;
    }
  }
  return s;
}

bool next_subset(IndexSet& s, std::size_t n) {
  const std::size_t k = s.size();
  std::size_t j = k;
  while (j > 0) {
    --j;
    if (s[j] < n - k + j) {
      ++s[j];
      for (std::size_t t = j + 1; t < k; ++t) s[t] = s[t - 1] + 1;
      return true;
    }
  }
  return false;
}

struct RangeResult {
  double delta = -1.0;
  double lambda_min = std::numeric_limits<double>::infinity();
  double lambda_max = -std::numeric_limits<double>::infinity();
  IndexSet worst;
  std::uint64_t count = 0;
};

RangeResult scan_range(const DenseMatrix& g, std::size_t order, std::uint64_t begin,
                       std::uint64_t count) {
  RangeResult out;
  if (count == 0) return out;
  const std::size_t n = g.rows();
  IndexSet s = unrank(begin, n, order);
  DenseMatrix sub(order, order);
  for (std::uint64_t done = 0; done < count; ++done) {
    for (std::size_t i = 0; i < order; ++i)
      for (std::size_t j = 0; j < order; ++j) sub(i, j) = g(s[i], s[j]);
    const Vector eig = symmetric_eigenvalues(sub);
    const double lo = eig.front();
    const double hi = eig.back();
    out.lambda_min = std::min(out.lambda_min, lo);
    out.lambda_max = std::max(out.lambda_max, hi);
    const double d = std::max(hi - 1.0, 1.0 - lo);
    if (d > out.delta) {
      out.delta = d;
      out.worst = s;
    }
    ++out.count;
    if (done + 1 < count) next_subset(s, n);
  }
  return out;
}

}  // namespace

RicDetails ric_details(const SensingMatrix& a, std::size_t order,
                       const RicOptions& options) {
  const std::size_t n = a.cols();
  if (order == 0 || order > n) {
    throw InvalidArgument("RIC order must be in [1, " + std::to_string(n) + "]");
  }
  const double total_d = binomial(n, order);
  if (total_d > options.subset_limit) {
    throw TooManySubsets(n, order, options.subset_limit);
  }
  const auto total = static_cast<std::uint64_t>(total_d);
  const DenseMatrix g = gram(a.matrix());

  unsigned workers = options.workers ? options.workers
                                     : std::max(1u, std::thread::hardware_concurrency());
  if (total < 4096) workers = 1;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));

  std::vector<RangeResult> parts(workers);
  const std::uint64_t chunk = total / workers;
  const std::uint64_t extra = total % workers;
  auto range_of = [&](unsigned w) {
    const std::uint64_t begin = w * chunk + std::min<std::uint64_t>(w, extra);
    return std::pair{begin, chunk + (w < extra ? 1 : 0)};
  };
  if (workers == 1) {
    parts[0] = scan_range(g, order, 0, total);
  } else {
    std::vector<std::jthread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          const auto [begin, count] = range_of(w);
          parts[w] = scan_range(g, order, begin, count);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    threads.clear();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Ranges are in lexicographic order; strict '>' keeps the first maximizer.
  RicDetails out;
  out.delta = -1.0;
  out.lambda_min = std::numeric_limits<double>::infinity();
  out.lambda_max = -std::numeric_limits<double>::infinity();
  for (const RangeResult& p : parts) {
    if (p.count == 0) continue;
    out.lambda_min = std::min(out.lambda_min, p.lambda_min);
    out.lambda_max = std::max(out.lambda_max, p.lambda_max);
    if (p.delta > out.delta) {
      out.delta = p.delta;
      out.worst_subset = p.worst;
    }
    out.subsets_examined += p.count;
  }
  out.delta = std::max(out.delta, 0.0);
  return out;
}

double exact_ric(const SensingMatrix& a, std::size_t order, const RicOptions& options) {
  return ric_details(a, order, options).delta;
}

double sharp_bound(std::size_t K, std::size_t N) {
  if (K == 0 || N == 0) throw InvalidArgument("sharp_bound: K and N must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(K) / static_cast<double>(N) + 1.0);
}

RicCertificate certify(const SensingMatrix& a, std::size_t K, std::size_t N,
                       const RicOptions& options) {
  RicCertificate cert;
  cert.K = K;
  cert.N = N;
  cert.bound = sharp_bound(K, N);
  cert.order = N * K + 1;
  if (cert.order > a.cols()) {
    throw InvalidArgument("certify: NK+1 = " + std::to_string(cert.order) +
                          " exceeds the column count " + std::to_string(a.cols()));
  }
  const RicDetails d = ric_details(a, cert.order, options);
  cert.delta = d.delta;
  cert.subsets_examined = d.subsets_examined;
  cert.passes = cert.delta < cert.bound - kCertificationMargin;
  return cert;
}

double min_magnitude_threshold(std::size_t K, std::size_t N, double delta,
                               double epsilon) {
  const double b = sharp_bound(K, N);
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  if (!(delta >= 0.0)) throw InvalidArgument("delta must be >= 0");
  if (delta >= b) throw BoundViolated(delta, b);
  return (2.0 * std::sqrt(static_cast<double>(K)) * epsilon * b) / (b - delta);
}

std::vector<double> ric_profile(const SensingMatrix& a,
                                const std::vector<std::size_t>& orders,
                                const RicOptions& options) {
  if (!std::is_sorted(orders.begin(), orders.end())) {
    throw InvalidArgument("orders must be ascending");
  }
  std::vector<double> deltas;
  deltas.reserve(orders.size());
  for (std::size_t order : orders) deltas.push_back(exact_ric(a, order, options));
  return deltas;
}

bool monotonicity_check(const SensingMatrix& a, const std::vector<std::size_t>& orders,
                        const RicOptions& options) {
  const std::vector<double> deltas = ric_profile(a, orders, options);
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (deltas[i] + 1e-12 < deltas[i - 1]) return false;
  }
  return true;
}

}  // namespace gompcert
