#pragma once

#include <cstdint>
#include <vector>

#include "gompcert/densela.hpp"
#include "gompcert/sensing.hpp"

namespace gompcert {

// Refuse exhaustive RIC enumeration beyond this many subsets.
inline constexpr double kRicSubsetLimit = 2'000'000;

// Certification requires delta < bound - kCertificationMargin; a delta equal
// to the bound up to rounding is therefore rejected.
inline constexpr double kCertificationMargin = 1e-10;

// C(n, k), saturating at +inf in double precision.
double binomial(std::size_t n, std::size_t k);

struct RicDetails {
  double delta = 0;          // max(lambda_max - 1, 1 - lambda_min)
  double lambda_min = 0;     // smallest eigenvalue over all subset Grams
  double lambda_max = 0;     // largest eigenvalue over all subset Grams
  IndexSet worst_subset;     // first subset (lexicographic) attaining delta
  std::uint64_t subsets_examined = 0;
};

struct RicOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  double subset_limit = kRicSubsetLimit;
};

// Restricted isometry constant of the given order by exhaustive enumeration
// of column subsets. Throws TooManySubsets above the subset limit.
RicDetails ric_details(const SensingMatrix& a, std::size_t order,
                       const RicOptions& options = {});
double exact_ric(const SensingMatrix& a, std::size_t order,
                 const RicOptions& options = {});

// 1 / sqrt(K/N + 1)
double sharp_bound(std::size_t K, std::size_t N);

struct RicCertificate {
  std::size_t order = 0;   // NK + 1
  double delta = 0;
  double bound = 0;
  bool passes = false;
  std::uint64_t subsets_examined = 0;
  std::size_t K = 0;
  std::size_t N = 0;
};

RicCertificate certify(const SensingMatrix& a, std::size_t K, std::size_t N,
                       const RicOptions& options = {});

// Minimum nonzero magnitude that guarantees support recovery under l2 noise
// of size epsilon:  (2 sqrt(K) eps b) / (b - delta),  b = sharp_bound(K, N).
// Throws BoundViolated when delta >= b.
double min_magnitude_threshold(std::size_t K, std::size_t N, double delta,
                               double epsilon);

// exact_ric at each order. `orders` must be ascending.
std::vector<double> ric_profile(const SensingMatrix& a,
                                const std::vector<std::size_t>& orders,
                                const RicOptions& options = {});

// True iff the RIC is non-decreasing along `orders` (slack 1e-12).
bool monotonicity_check(const SensingMatrix& a, const std::vector<std::size_t>& orders,
                        const RicOptions& options = {});

}  // namespace gompcert
