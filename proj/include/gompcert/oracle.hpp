#pragma once

#include <cstdint>
#include <optional>

#include "gompcert/densela.hpp"
#include "gompcert/sensing.hpp"

namespace gompcert {

// One instance of the two-sided norm identity
//
//   ||A(x + sum_W t_i e_i)||^2 - ||A(t^2 x - sum_W t_i e_i)||^2
//     = (1 - t^4) (<Ax, Ax> - C sum_W |<Ax, A e_i>|)
//
// with t = sign * (sqrt(S+1) - 1) / sqrt(S) and t_i = -/+ (C/2)(1 - t^2)
// chosen against the sign of <Az, A e_i>, where z is `sign_source` (x when
// absent). The identity is only guaranteed for z = x.
struct NormIdentityInstance {
  SensingMatrix a;
  Vector x;
  IndexSet w;
  double s = 1.0;
  double c = 1.0;
  int t_sign = 1;
  std::optional<Vector> sign_source;
};

double norm_identity_t(double s, int t_sign);
// t_i for each index of inst.w, in order. Validates the instance.
Vector norm_identity_coefficients(const NormIdentityInstance& inst);

struct NormIdentityGap {
  double lhs = 0;
  double rhs = 0;
  double gap() const { return lhs - rhs; }
  // |gap| <= 1e-9 (1 + |lhs| + |rhs|)
  bool holds() const;
};

NormIdentityGap norm_identity_gap(const NormIdentityInstance& inst);

// Whether the identity still holds after x -> c x (c != 0).
bool norm_identity_scale_invariance(const NormIdentityInstance& inst, double c);

inline constexpr double kBruteForceSubsetLimit = 500'000;

struct BruteForceResult {
  IndexSet support;
  Vector coefficients;
  double residual_norm = 0;
  std::uint64_t subsets_examined = 0;
  std::uint64_t subsets_skipped = 0;  // rank-deficient column subsets
};

// Exhaustive l0 search over supports of size <= K, smallest size first and
// lexicographic within a size. Returns the first support whose residual is
// at most 1e-10 ||y||, otherwise the residual minimizer (ties go to the
// earlier support).
BruteForceResult brute_force_recover(const SensingMatrix& a, std::span<const double> y,
                                     std::size_t K);

}  // namespace gompcert
