#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gompcert/densela.hpp"
#include "gompcert/sensing.hpp"

namespace gompcert {

// Correlation magnitudes within this absolute distance of the selection
// boundary are treated as tied.
inline constexpr double kTieTolerance = 1e-12;

// How ties at the selection boundary are resolved.
class TiePolicy {
 public:
  enum class Kind { kLexicographic, kAdversarial };

  // Smallest indices first.
  static TiePolicy lexicographic() { return TiePolicy(Kind::kLexicographic, {}); }
  // Tied indices outside `avoid` first, then smallest index. `avoid` must be
  // non-empty; it is usually the true support.
  static TiePolicy adversarial(IndexSet avoid);

  Kind kind() const noexcept { return kind_; }
  const IndexSet& avoid_set() const noexcept { return avoid_; }
  bool avoids(std::size_t index) const;
  std::string name() const;

 private:
  TiePolicy(Kind kind, IndexSet avoid) : kind_(kind), avoid_(std::move(avoid)) {}
  Kind kind_;
  IndexSet avoid_;  // sorted
};

// Identification step: N indices holding the N largest magnitudes, ties at
// the boundary resolved by `policy`. Returned sorted ascending.
IndexSet identify(std::span<const double> magnitudes, std::size_t N,
                  const TiePolicy& policy);

struct SelectionMargins {
  double beta1;   // largest |<A_i, r>| over i in T \ Lambda
  double alphaN;  // N-th largest |<A_i, r>| over i outside T u Lambda
};

// Throws EmptyCandidateSet if T \ Lambda is empty or fewer than N columns
// lie outside T u Lambda.
SelectionMargins selection_margins(const SensingMatrix& a, std::span<const double> r,
                                   const IndexSet& true_support,
                                   const IndexSet& current_estimate, std::size_t N);

struct IterationRecord {
  IndexSet selected;                // T^k
  double residual_norm_after = 0;   // ||r^k||
  Vector correlations;              // |A' r^{k-1}|
  std::optional<double> beta1;      // diagnostics mode only
  std::optional<double> alphaN;
};

enum class Termination { kResidualBelowEpsilon, kIterationCap };

std::string to_string(Termination t);

struct RecoveryResult {
  IndexSet estimated_support;   // Lambda^k, sorted
  Vector coefficients;          // aligned with estimated_support
  std::vector<IterationRecord> iterations;
  Termination termination = Termination::kResidualBelowEpsilon;
  double final_residual_norm = 0;

  // Full-length estimate x_hat in R^n.
  Vector signal(std::size_t n) const;
};

struct GompParams {
  std::size_t K = 1;
  std::size_t N = 1;
  double epsilon = 0.0;
  TiePolicy policy = TiePolicy::lexicographic();
  // When set, every iteration records beta1/alphaN against this support.
  std::optional<IndexSet> true_support;
};

// Residuals below this fraction of ||y|| count as zero when epsilon = 0.
inline constexpr double kZeroResidualFraction = 1e-13;

// Iteration bound min{K, m/K} with real-valued m/K.
double iteration_cap(std::size_t m, std::size_t K);

// Generalized OMP. Each iteration picks the N columns most correlated with
// the residual, adds them to the support, re-solves least squares on the
// support and updates the residual. Runs while ||r|| > epsilon and
// k < min{K, m/K}. Requires 1 <= N <= K and N*K <= m.
RecoveryResult gomp_recover(const SensingMatrix& a, std::span<const double> y,
                            const GompParams& params);

}  // namespace gompcert
