#pragma once

#include <cstdint>

#include "gompcert/densela.hpp"
#include "gompcert/gomp.hpp"
#include "gompcert/ric.hpp"
#include "gompcert/sensing.hpp"

namespace gompcert {

// A uniformly random direction scaled to norm exactly epsilon. epsilon = 0
// yields the zero vector.
Vector gen_bounded_noise(std::size_t m, double epsilon, std::uint64_t seed);

struct NoisySetup {
  std::size_t K = 1;
  std::size_t N = 1;
  double epsilon = 0;
  double delta = 0;      // certified RIC of order NK+1
  double threshold = 0;  // min_magnitude_threshold(K, N, delta, epsilon)
  std::uint64_t seed = 0;

  // Throws HypothesisViolated unless the certificate passes.
  static NoisySetup from_certificate(const RicCertificate& cert, double epsilon,
                                     std::uint64_t seed);
};

enum class TrialMode {
  kStrict,      // all hypotheses enforced
  kExploratory,  // magnitude condition not enforced; result asserts nothing
};

struct TrialOutcome {
  bool recovered = false;       // T subset of Lambda
  std::size_t spurious = 0;     // |Lambda \ T|
  RecoveryResult recovery;
};

// y = A x + e with x supported on `support` with the given values and e from
// gen_bounded_noise(m, epsilon, setup.seed); runs gOMP with stopping rule
// ||r|| <= epsilon. Throws HypothesisViolated when the instance does not meet
// the recovery hypotheses (unit-norm columns, |support| <= K, every
// |value| > threshold in kStrict mode).
TrialOutcome support_recovery_trial(const SensingMatrix& a, const NoisySetup& setup,
                                    const IndexSet& support,
                                    std::span<const double> magnitudes,
                                    const TiePolicy& policy,
                                    TrialMode mode = TrialMode::kStrict);

}  // namespace gompcert
