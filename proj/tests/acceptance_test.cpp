// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values are computed here independently of the
// library routines under test wherever that is practical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gompcert/errors.hpp"
#include "gompcert/gomp.hpp"
#include "gompcert/noise.hpp"
#include "gompcert/oracle.hpp"
#include "gompcert/random.hpp"
#include "gompcert/ric.hpp"
#include "gompcert/sensing.hpp"
#include "oracles.hpp"

using namespace gompcert;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

IndexSet first_k(std::size_t K) {
  IndexSet t(K);
  for (std::size_t i = 0; i < K; ++i) t[i] = i;
  return t;
}

bool covers(const IndexSet& big, const IndexSet& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Vector sparse_signal(Rng& rng, std::size_t n, const IndexSet& support) {
  Vector x(n, 0.0);
  for (std::size_t i : support) x[i] = rng.sign() * rng.uniform(0.5, 2.0);
  return x;
}

// Closed-form spectrum, built independently of counterexample_spectrum().
Vector expected_spectrum(std::size_t K, std::size_t N) {
  const double k = double(K), n = double(N);
  Vector v;
  for (std::size_t i = 0; i + 1 < K; ++i) v.push_back(k / (k + n));
  for (std::size_t i = 0; i < N * K - K; ++i) v.push_back(1.0);
  const double r = 1.0 / std::sqrt(k / n + 1.0);
  v.push_back(1.0 - r);
  v.push_back(1.0 + r);
  std::sort(v.begin(), v.end());
  return v;
}

// ---- 1 ----------------------------------------------------------------------------
Verdict counterexample_spectrum_check() {
  Verdict v;
  double worst = 0.0;
  for (std::size_t K = 1; K <= 5; ++K)
    for (std::size_t N = 1; N <= 5; ++N) {
      const SensingMatrix a = gen_counterexample(K, N);
      const Vector got = symmetric_eigenvalues(gram(a.matrix()));
      const double err = testing::max_abs_diff(got, expected_spectrum(K, N));
      worst = std::max(worst, err);
      if (!(err <= 1e-10)) {
        v.pass = false;
        v.detail += " (K=" + std::to_string(K) + ",N=" + std::to_string(N) + ")";
      }
    }
  v.detail = "25 pairs, max eigenvalue deviation " + fmt(worst) + v.detail;
  return v;
}

// ---- 2 ----------------------------------------------------------------------------
Verdict sharpness_equality() {
  Verdict v;
  double worst = 0.0;
  int certified = 0;
  for (std::size_t K = 1; K <= 4; ++K)
    for (std::size_t N = 1; N <= 4; ++N) {
      const SensingMatrix a = gen_counterexample(K, N);
      const double expected = 1.0 / std::sqrt(double(K) / double(N) + 1.0);
      const double delta = exact_ric(a, N * K + 1);
      worst = std::max(worst, std::abs(delta - expected));
      if (!(std::abs(delta - expected) <= 1e-10)) v.pass = false;
      if (certify(a, K, N).passes) {
        ++certified;
        v.pass = false;
      }
    }
  v.detail = "16 pairs, max |delta - bound| " + fmt(worst) + ", certificates passing " +
             std::to_string(certified) + " (expected 0)";
  return v;
}

// ---- 3 ----------------------------------------------------------------------------
Verdict tie_and_failure() {
  Verdict v;
  double worst = 0.0;
  int full_runs = 0, first_step_only = 0, hits = 0;
  for (std::size_t K = 1; K <= 4; ++K)
    for (std::size_t N = 1; N <= 4; ++N) {
      const SensingMatrix a = gen_counterexample(K, N);
      Vector x(a.cols(), 0.0);
      for (std::size_t i = 0; i < K; ++i) x[i] = 1.0;
      const Vector y = a.matrix().apply(x);
      const IndexSet t = first_k(K);
      const SelectionMargins m = selection_margins(a, y, t, {}, N);
      const double tie = double(K) / double(K + N);
      worst = std::max({worst, std::abs(m.beta1 - tie), std::abs(m.alphaN - tie)});

      IndexSet first;
      if (N <= K) {
        GompParams p;
        p.K = K;
        p.N = N;
        p.epsilon = 1e-8;
        p.policy = TiePolicy::adversarial(t);
        first = gomp_recover(a, y, p).iterations.at(0).selected;
        ++full_runs;
      } else {
        // gOMP's input condition N <= K fails; evaluate its identification step.
        Vector corr = a.matrix().apply_transpose(y);
        for (double& c : corr) c = std::abs(c);
        first = identify(corr, N, TiePolicy::adversarial(t));
        ++first_step_only;
      }
      for (std::size_t i : first)
        if (i < K) ++hits;
    }
  if (!(worst <= 1e-12) || hits != 0) v.pass = false;
  v.detail = "16 pairs, max |margin - K/(K+N)| " + fmt(worst) + ", adversarial first picks in T: " +
             std::to_string(hits) + " (" + std::to_string(full_runs) + " full runs, " +
             std::to_string(first_step_only) + " first-step only where N > K)";
  return v;
}

// ---- 4 ----------------------------------------------------------------------------
struct PoolEntry {
  std::string label;
  SensingMatrix a;
};

std::vector<PoolEntry> recovery_pool() {
  std::vector<PoolEntry> pool;
  pool.push_back({"I10", SensingMatrix(DenseMatrix::identity(10))});
  pool.push_back({"I12", SensingMatrix(DenseMatrix::identity(12))});
  for (double s : {0.5, 1.0, 2.0})
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      pool.push_back({"dup10x12", gen_perturbed_identity(10, 2, s, seed)});
  for (double s : {0.02, 0.05, 0.1})
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      pool.push_back({"jit10", gen_jittered_identity(10, s, seed)});
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
    pool.push_back({"gauss10x12", gen_gaussian(10, 12, seed)});
  return pool;
}

Verdict certified_recovery() {
  Verdict v;
  const std::vector<PoolEntry> pool = recovery_pool();
  std::uint64_t runs = 0, failures = 0;
  std::ostringstream per_pair;
  Rng rng(20260401);
  for (std::size_t K = 1; K <= 3; ++K)
    for (std::size_t N = 1; N <= K; ++N) {
      std::size_t certified = 0;
      for (const PoolEntry& e : pool) {
        const std::size_t m = e.a.rows(), n = e.a.cols();
        if (N * K > m || N * K + 1 > n) continue;
        if (!certify(e.a, K, N).passes) continue;
        ++certified;
        for (const IndexSet& t : testing::all_subsets(n, K))
          for (int draw = 0; draw < 5; ++draw) {
            const Vector y = e.a.matrix().apply(sparse_signal(rng, n, t));
            for (const TiePolicy& pol : {TiePolicy::lexicographic(), TiePolicy::adversarial(t)}) {
              GompParams p;
              p.K = K;
              p.N = N;
              p.epsilon = 1e-8;
              p.policy = pol;
              ++runs;
              try {
                const RecoveryResult r = gomp_recover(e.a, y, p);
                if (!covers(r.estimated_support, t) || !(r.final_residual_norm <= 1e-8)) ++failures;
              } catch (const Error&) {
                ++failures;
              }
            }
          }
      }
      per_pair << " (" << K << "," << N << "):" << certified;
      if (certified == 0) v.pass = false;  // a vacuous pair proves nothing
    }
  if (failures != 0) v.pass = false;
  v.detail = std::to_string(pool.size()) + " matrices, certified per (K,N)" + per_pair.str() +
             "; " + std::to_string(runs - failures) + "/" + std::to_string(runs) +
             " recoveries succeeded";
  return v;
}

// ---- 5 ----------------------------------------------------------------------------
Verdict norm_identity_identity() {
  Verdict v;
  Rng rng(5150);
  double worst = 0.0;
  int holds = 0, scale_ok = 0, degenerate = 0, negative_t = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const bool degen = trial % 4 == 0;
    const NormIdentityInstance inst = testing::random_norm_identity_instance(rng, degen);
    degenerate += degen;
    negative_t += inst.t_sign < 0;
    const NormIdentityGap g = norm_identity_gap(inst);
    const testing::NormIdentityExpansion e = testing::norm_identity_expansion(inst);
    const double scale = 1.0 + std::abs(g.lhs) + std::abs(g.rhs);
    worst = std::max({worst, std::abs(g.gap()) / scale, std::abs(e.lhs - g.rhs) / scale});
    holds += g.holds();
    bool ok = true;
    for (double c : {-1.0, 1e-3, 1e3}) ok = ok && norm_identity_scale_invariance(inst, c);
    scale_ok += ok;
  }
  if (holds != 1000 || scale_ok != 1000 || !(worst <= 1e-9)) v.pass = false;
  v.detail = "1000 instances (" + std::to_string(degenerate) + " degenerate, " +
             std::to_string(negative_t) + " with t < 0), max relative gap " + fmt(worst) +
             ", scale-invariant " + std::to_string(scale_ok) + "/1000";
  return v;
}

// ---- 6 ----------------------------------------------------------------------------
Verdict monotonicity() {
  Verdict v;
  int checked = 0, monotone = 0;
  double oracle_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const SensingMatrix a = gen_gaussian(6, 9, seed);
    const std::vector<double> prof = ric_profile(a, {1, 2, 3});
    for (std::size_t order = 1; order <= 3; ++order)
      oracle_err = std::max(oracle_err,
                            std::abs(prof[order - 1] - testing::closed_form_ric(a.matrix(), order)));
    ++checked;
    monotone += monotonicity_check(a, {1, 2, 3});
  }
  for (std::size_t K = 1; K <= 3; ++K)
    for (std::size_t N = 1; N <= 3; ++N) {
      const SensingMatrix a = gen_counterexample(K, N);
      std::vector<std::size_t> orders;
      for (std::size_t o = 1; o <= std::min<std::size_t>(3, a.cols()); ++o) orders.push_back(o);
      ++checked;
      monotone += monotonicity_check(a, orders);
    }
  if (monotone != checked || !(oracle_err <= 1e-10)) v.pass = false;
  v.detail = std::to_string(monotone) + "/" + std::to_string(checked) +
             " matrices non-decreasing; random-matrix profiles vs closed-form oracle max error " +
             fmt(oracle_err);
  return v;
}

// ---- 7 ----------------------------------------------------------------------------
Verdict omp_reduction() {
  Verdict v;
  int bound_mismatch = 0;
  for (std::size_t K = 1; K <= 50; ++K)
    if (sharp_bound(K, 1) != 1.0 / std::sqrt(double(K) + 1.0)) ++bound_mismatch;

  Rng rng(777);
  int matched = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 8 + rng.below(13);
    const std::size_t n = m + 1 + rng.below(20);
    const std::size_t K = 1 + rng.below(std::min<std::size_t>(5, m / 2));
    const SensingMatrix a = gen_gaussian(m, n, 9000 + std::uint64_t(trial));
    // Half the instances are sparse, half are arbitrary measurement vectors.
    const Vector y = trial % 2 == 0
                         ? a.matrix().apply(sparse_signal(rng, n, testing::random_subset(rng, n, K)))
                         : testing::random_vector(rng, m);
    GompParams p;
    p.K = K;
    p.N = 1;
    p.epsilon = 1e-8;
    const RecoveryResult r = gomp_recover(a, y, p);
    const testing::OmpTrace ref = testing::reference_omp(a.matrix(), y, K, 1e-8);
    bool same = r.iterations.size() == ref.selected.size();
    for (std::size_t k = 0; same && k < ref.selected.size(); ++k)
      same = r.iterations[k].selected == IndexSet{ref.selected[k]};
    matched += same;
  }
  if (bound_mismatch != 0 || matched != 200) v.pass = false;
  v.detail = "sharp_bound(K,1) == 1/sqrt(K+1) bitwise for K<=50 (mismatches " +
             std::to_string(bound_mismatch) + "); traces identical " + std::to_string(matched) +
             "/200";
  return v;
}

// ---- 8 ----------------------------------------------------------------------------
Verdict noise_suite() {
  Verdict v;
  struct Certified {
    SensingMatrix a;
    std::size_t K, N;
    RicCertificate cert;
  };
  std::vector<Certified> mats;
  const std::pair<std::size_t, std::size_t> kn[] = {{1, 1}, {2, 1}, {2, 2}, {3, 1}};
  for (auto [K, N] : kn) {
    const SensingMatrix id(DenseMatrix::identity(8));
    mats.push_back({id, K, N, certify(id, K, N)});
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const SensingMatrix j = gen_jittered_identity(10, 0.03, seed);
      const RicCertificate c = certify(j, K, N);
      if (c.passes) mats.push_back({j, K, N, c});
    }
  }
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SensingMatrix d = gen_perturbed_identity(10, 2, 1.0, seed);
    const RicCertificate c = certify(d, 1, 1);
    if (c.passes) mats.push_back({d, 1, 1, c});
  }

  Rng rng(8080);
  std::uint64_t runs = 0, ok = 0;
  std::size_t with_delta = 0;
  for (const Certified& c : mats) with_delta += c.cert.delta > 0.0;
  for (double eps : {0.05, 0.1}) {
    for (int trial = 0; trial < 500; ++trial) {
      const Certified& c = mats[std::size_t(trial) % mats.size()];
      const NoisySetup setup =
          NoisySetup::from_certificate(c.cert, eps, derive_seed(std::uint64_t(eps * 1000), trial));
      const IndexSet t = testing::random_subset(rng, c.a.cols(), c.K);
      Vector vals(c.K);
      for (double& x : vals) x = rng.sign() * 1.01 * setup.threshold;
      for (const TiePolicy& pol : {TiePolicy::lexicographic(), TiePolicy::adversarial(t)}) {
        ++runs;
        if (support_recovery_trial(c.a, setup, t, vals, pol).recovered) ++ok;
      }
    }
  }
  if (ok != runs || with_delta == 0) v.pass = false;
  v.detail = std::to_string(mats.size()) + " certified (matrix,K,N) setups (" +
             std::to_string(with_delta) + " with delta > 0), 500 trials per epsilon x 2 policies: " +
             std::to_string(ok) + "/" + std::to_string(runs) + " recovered the support";
  return v;
}

// ---- 9 ----------------------------------------------------------------------------
IndexSet nonzero_support(const RecoveryResult& r) {
  double peak = 0.0;
  for (double c : r.coefficients) peak = std::max(peak, std::abs(c));
  IndexSet s;
  for (std::size_t i = 0; i < r.estimated_support.size(); ++i)
    if (std::abs(r.coefficients[i]) > 1e-9 * peak) s.push_back(r.estimated_support[i]);
  return s;
}

Verdict oracle_agreement() {
  Verdict v;
  Rng rng(9999);
  int compared = 0, agree = 0, exact_lambda = 0, with_n1 = 0;
  std::uint64_t seed = 0;
  while (compared < 200) {
    ++seed;
    const std::size_t K = 1 + rng.below(3);
    const std::size_t N = 1 + rng.below(K);
    SensingMatrix a = [&] {
      switch (seed % 3) {
        case 0: return gen_jittered_identity(10, 0.05, seed);
        case 1: return gen_perturbed_identity(8, 2, 1.0, seed);
        default: return gen_gaussian(8, 10, seed);
      }
    }();
    if (N * K > a.rows() || N * K + 1 > a.cols()) continue;
    if (!certify(a, K, N).passes) continue;
    const IndexSet t = testing::random_subset(rng, a.cols(), K);
    const Vector y = a.matrix().apply(sparse_signal(rng, a.cols(), t));
    GompParams p;
    p.K = K;
    p.N = N;
    p.epsilon = 1e-10;
    const RecoveryResult g = gomp_recover(a, y, p);
    const BruteForceResult b = brute_force_recover(a, y, K);
    ++compared;
    if (N == 1) {
      ++with_n1;
      const bool same = g.estimated_support == b.support;
      exact_lambda += same;
      agree += same;
    } else {
      agree += nonzero_support(g) == b.support;
    }
  }
  if (agree != compared) v.pass = false;
  v.detail = std::to_string(agree) + "/" + std::to_string(compared) +
             " certified instances agree (" + std::to_string(exact_lambda) + "/" +
             std::to_string(with_n1) +
             " with N=1 compared on the full estimated support, N>1 on its nonzero entries)";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "counterexample spectrum", counterexample_spectrum_check},
      {2, "sharpness equality", sharpness_equality},
      {3, "tie and failure", tie_and_failure},
      {4, "certified recovery", certified_recovery},
      {5, "norm identity", norm_identity_identity},
      {6, "RIC monotonicity", monotonicity},
      {7, "OMP reduction", omp_reduction},
      {8, "noisy support recovery", noise_suite},
      {9, "brute-force agreement", oracle_agreement},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  criterion %d  %-24s %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
