#include "gompcert/noise.hpp"

#include <algorithm>
#include <cmath>

#include "gompcert/errors.hpp"
#include "gompcert/random.hpp"

namespace gompcert {

Vector gen_bounded_noise(std::size_t m, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("epsilon must be finite and >= 0");
  }
  if (m == 0) throw InvalidArgument("gen_bounded_noise: m must be >= 1");
  Vector e(m, 0.0);
  if (epsilon == 0.0) return e;
  Rng rng(seed);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& v : e) v = rng.normal();
    norm = norm2(e);
  }
  for (double& v : e) v = v / norm * epsilon;
  return e;
}

NoisySetup NoisySetup::from_certificate(const RicCertificate& cert, double epsilon,
                                        std::uint64_t seed) {
  if (!cert.passes) {
    throw HypothesisViolated("matrix is not certified for K=" + std::to_string(cert.K) +
                             ", N=" + std::to_string(cert.N));
  }
  NoisySetup s;
  s.K = cert.K;
  s.N = cert.N;
  s.epsilon = epsilon;
  s.delta = cert.delta;
  s.threshold = min_magnitude_threshold(cert.K, cert.N, cert.delta, epsilon);
  s.seed = seed;
  return s;
}

TrialOutcome support_recovery_trial(const SensingMatrix& a, const NoisySetup& setup,
                                    const IndexSet& support,
                                    std::span<const double> magnitudes,
                                    const TiePolicy& policy, TrialMode mode) {
  double threshold = 0.0;
  try {
    threshold = min_magnitude_threshold(setup.K, setup.N, setup.delta, setup.epsilon);
  } catch (const BoundViolated& e) {
    throw HypothesisViolated(e.what());
  }
  if (std::abs(threshold - setup.threshold) > 1e-12) {
    throw HypothesisViolated("setup threshold is inconsistent with (K, N, delta, epsilon)");
  }
  if (!a.normalized()) throw HypothesisViolated("columns must have unit norm");
  if (support.size() > setup.K) throw HypothesisViolated("|support| exceeds K");
  if (magnitudes.size() != support.size()) {
    throw DimensionMismatch("one value per support index is required");
  }
  IndexSet t = support;
  std::sort(t.begin(), t.end());
  if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
    throw InvalidArgument("support has duplicate indices");
  }
  if (!t.empty() && t.back() >= a.cols()) throw InvalidArgument("support index out of range");
  if (mode == TrialMode::kStrict) {
    for (double v : magnitudes) {
      if (!(std::abs(v) > setup.threshold)) {
        throw HypothesisViolated("nonzero magnitude " + std::to_string(std::abs(v)) +
                                 " does not exceed the threshold " +
                                 std::to_string(setup.threshold));
      }
    }
  }

  Vector x(a.cols(), 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = magnitudes[j];
  Vector y = a.matrix().apply(x);
  const Vector e = gen_bounded_noise(a.rows(), setup.epsilon, setup.seed);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += e[i];

  GompParams params;
  params.K = setup.K;
  params.N = setup.N;
  params.epsilon = setup.epsilon;
  params.policy = policy;

  TrialOutcome out;
  out.recovery = gomp_recover(a, y, params);
  const IndexSet& lambda = out.recovery.estimated_support;
  out.recovered = std::includes(lambda.begin(), lambda.end(), t.begin(), t.end());
  out.spurious = static_cast<std::size_t>(std::count_if(
      lambda.begin(), lambda.end(),
      [&](std::size_t i) { return !std::binary_search(t.begin(), t.end(), i); }));
  return out;
}

}  // namespace gompcert
