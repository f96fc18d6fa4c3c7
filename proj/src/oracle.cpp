#include "gompcert/oracle.hpp"

#include <cmath>

#include "gompcert/errors.hpp"
#include "gompcert/ric.hpp"

namespace gompcert {

double norm_identity_t(double s, int t_sign) {
  if (!(s > 0.0)) throw InvalidArgument("S must be positive");
  if (t_sign != 1 && t_sign != -1) throw InvalidArgument("t sign must be +1 or -1");
  return t_sign * (std::sqrt(s + 1.0) - 1.0) / std::sqrt(s);
}

namespace {

void validate(const NormIdentityInstance& inst) {
  const std::size_t n = inst.a.cols();
  if (inst.x.size() != n) throw DimensionMismatch("x length must equal n");
  if (inst.w.empty()) throw InvalidArgument("W must be non-empty");
  for (std::size_t i : inst.w) {
    if (i >= n) throw InvalidArgument("W index out of range");
  }
  if (!(inst.c > 0.0)) throw InvalidArgument("C must be positive");
  if (inst.sign_source && inst.sign_source->size() != n) {
    throw DimensionMismatch("sign source length must equal n");
  }
  const double t = norm_identity_t(inst.s, inst.t_sign);
  if (!(t * t < 1.0)) throw InvalidArgument("t^2 < 1 violated");
}

}  // namespace

Vector norm_identity_coefficients(const NormIdentityInstance& inst) {
  validate(inst);
  const double t = norm_identity_t(inst.s, inst.t_sign);
  const double mag = 0.5 * inst.c * (1.0 - t * t);
  const DenseMatrix& a = inst.a.matrix();
  const Vector az = a.apply(inst.sign_source ? *inst.sign_source : inst.x);
  Vector ti;
  ti.reserve(inst.w.size());
  for (std::size_t i : inst.w) {
    ti.push_back(dot(az, a.column(i)) >= 0.0 ? -mag : mag);
  }
  return ti;
}

bool NormIdentityGap::holds() const {
  return std::abs(gap()) <= 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs));
}

NormIdentityGap norm_identity_gap(const NormIdentityInstance& inst) {
  const Vector ti = norm_identity_coefficients(inst);
  const double t = norm_identity_t(inst.s, inst.t_sign);
  const double t2 = t * t;
  const DenseMatrix& a = inst.a.matrix();
  const std::size_t n = a.cols();

  Vector plus = inst.x;
  Vector minus(n);
  for (std::size_t j = 0; j < n; ++j) minus[j] = t2 * inst.x[j];
  for (std::size_t k = 0; k < inst.w.size(); ++k) {
    plus[inst.w[k]] += ti[k];
    minus[inst.w[k]] -= ti[k];
  }
  const double np = norm2(a.apply(plus));
  const double nm = norm2(a.apply(minus));

  const Vector ax = a.apply(inst.x);
  double corr_sum = 0.0;
  for (std::size_t i : inst.w) corr_sum += std::abs(dot(ax, a.column(i)));

  NormIdentityGap out;
  out.lhs = np * np - nm * nm;
  out.rhs = (1.0 - t2 * t2) * (dot(ax, ax) - inst.c * corr_sum);
  return out;
}

bool norm_identity_scale_invariance(const NormIdentityInstance& inst, double c) {
  if (c == 0.0 || !std::isfinite(c)) throw InvalidArgument("scale must be a nonzero finite number");
  NormIdentityInstance scaled = inst;
  for (double& v : scaled.x) v *= c;
  if (scaled.sign_source) {
    for (double& v : *scaled.sign_source) v *= c;
  }
  return norm_identity_gap(scaled).holds();
}

BruteForceResult brute_force_recover(const SensingMatrix& a, std::span<const double> y,
                                     std::size_t K) {
  const std::size_t n = a.cols();
  if (y.size() != a.rows()) throw DimensionMismatch("y length does not match the row count");
  if (K > n) throw InvalidArgument("K exceeds the column count");
  if (binomial(n, K) > kBruteForceSubsetLimit) {
    throw TooManySubsets(n, K, kBruteForceSubsetLimit);
  }

  const double ynorm = norm2(y);
  const double accept = 1e-10 * ynorm;

  BruteForceResult best;
  best.residual_norm = ynorm;  // empty support
  std::uint64_t examined = 1;
  std::uint64_t skipped = 0;
  if (ynorm <= accept) {
    best.subsets_examined = examined;
    return best;
  }

  for (std::size_t size = 1; size <= K; ++size) {
    IndexSet s(size);
    for (std::size_t j = 0; j < size; ++j) s[j] = j;
    while (true) {
      ++examined;
      try {
        const HouseholderQR qr(a.matrix().select_columns(s));
        const double res = norm2(qr.residual(y));
        if (res < best.residual_norm) {
          best.residual_norm = res;
          best.support = s;
          best.coefficients = qr.solve(y);
          if (res <= accept) {
            best.subsets_examined = examined;
            best.subsets_skipped = skipped;
            return best;
          }
        }
      } catch (const RankDeficient&) {
        ++skipped;
      }
      // Advance to the next lexicographic subset of this size.
      std::size_t j = size;
      bool advanced = false;
      while (j > 0) {
        --j;
        if (s[j] < n - size + j) {
          ++s[j];
          for (std::size_t t = j + 1; t < size; ++t) s[t] = s[t - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  }
  best.subsets_examined = examined;
  best.subsets_skipped = skipped;
  return best;
}

}  // namespace gompcert
