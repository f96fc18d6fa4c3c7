#include "gompcert/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "gompcert/errors.hpp"
#include "gompcert/noise.hpp"
#include "gompcert/random.hpp"

namespace gompcert {

namespace {

constexpr double kRecoveryTolerance = 1e-8;

// Runs fn(0..count-1) on up to `workers` threads. Each index writes only its
// own output slot, so the result is independent of scheduling.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < count; i = next++) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string join(const IndexSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out;
}

std::string set_text(const IndexSet& s) { return "{" + join(s) + "}"; }

const char* yes_no(bool b) { return b ? "true" : "false"; }

bool covers(const IndexSet& lambda, const IndexSet& t) {
  return std::includes(lambda.begin(), lambda.end(), t.begin(), t.end());
}

IndexSet random_support(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  IndexSet s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(s.begin(), s.end());
  return s;
}

Vector signal_on(std::size_t n, const IndexSet& support, std::span<const double> values) {
  Vector x(n, 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) x[support[j]] = values[j];
  return x;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  out << text;
}

}  // namespace

// ---- counterexample demo -----------------------------------------------------

CounterexampleReport run_counterexample_demo(std::size_t K, std::size_t N) {
  if (K == 0 || N == 0) throw InvalidArgument("K and N must be >= 1");
  if (N * K + 1 > kDemoMaxSize) {
    throw GuardExceeded("NK+1 = " + std::to_string(N * K + 1) + " exceeds the demo limit of " +
                        std::to_string(kDemoMaxSize));
  }
  CounterexampleReport rep;
  rep.K = K;
  rep.N = N;
  const SensingMatrix a = gen_counterexample(K, N);
  const std::size_t n = a.cols();

  rep.eigenvalues = symmetric_eigenvalues(gram(a.matrix()));
  rep.expected_eigenvalues = counterexample_spectrum(K, N);
  for (std::size_t i = 0; i < n; ++i) {
    rep.spectrum_error = std::max(
        rep.spectrum_error, std::abs(rep.eigenvalues[i] - rep.expected_eigenvalues[i]));
  }
  if (rep.spectrum_error > 1e-10) {
    throw VerificationFailed("counterexample spectrum deviates from the closed form by " +
                             format_double(rep.spectrum_error));
  }

  const RicCertificate cert = certify(a, K, N);
  rep.delta = cert.delta;
  rep.bound = cert.bound;
  rep.certified = cert.passes;
  if (std::abs(rep.delta - rep.bound) > 1e-10) {
    throw VerificationFailed("counterexample RIC " + format_double(rep.delta) +
                             " differs from the bound " + format_double(rep.bound));
  }

  IndexSet t(K);
  for (std::size_t i = 0; i < K; ++i) t[i] = i;
  const Vector x = signal_on(n, t, Vector(K, 1.0));
  const Vector y = a.matrix().apply(x);
  const SelectionMargins sm = selection_margins(a, y, t, {}, N);
  rep.beta1 = sm.beta1;
  rep.alphaN = sm.alphaN;

  Vector corr = a.matrix().apply_transpose(y);
  for (double& v : corr) v = std::abs(v);
  for (const TiePolicy& policy : {TiePolicy::lexicographic(), TiePolicy::adversarial(t)}) {
    PolicyRun run;
    run.policy = policy.name();
    run.first_selection = identify(corr, N, policy);
    run.first_selection_hits_support =
        std::any_of(run.first_selection.begin(), run.first_selection.end(),
                    [&](std::size_t i) { return i < K; });
    if (N <= K) {
      GompParams params;
      params.K = K;
      params.N = N;
      params.epsilon = kRecoveryTolerance;
      params.policy = policy;
      const RecoveryResult res = gomp_recover(a, y, params);
      run.ran_full_recovery = true;
      run.final_support = res.estimated_support;
      run.final_residual = res.final_residual_norm;
      run.recovered = covers(res.estimated_support, t) &&
                      res.final_residual_norm <= kRecoveryTolerance;
    }
    rep.runs.push_back(std::move(run));
  }
  return rep;
}

std::string CounterexampleReport::to_text() const {
  std::ostringstream os;
  os << "Sharpness counterexample, K=" << K << " N=" << N << " (size " << eigenvalues.size()
     << "x" << eigenvalues.size() << ")\n";
  os << "  Gram spectrum:      " << join(eigenvalues) << "\n";
  os << "  closed form:        " << join(expected_eigenvalues) << "\n";
  os << "  max deviation:      " << format_double(spectrum_error) << "\n";
  os << "  delta_{NK+1}:       " << format_double(delta) << "\n";
  os << "  sharp bound:        " << format_double(bound) << "\n";
  os << "  certified:          " << yes_no(certified) << "\n";
  os << "  beta1 (iter 1):     " << format_double(beta1) << "\n";
  os << "  alphaN (iter 1):    " << format_double(alphaN) << "\n";
  for (const PolicyRun& r : runs) {
    os << "  policy " << r.policy << ": first selection " << set_text(r.first_selection)
       << (r.first_selection_hits_support ? " (hits support)" : " (misses support)");
    if (r.ran_full_recovery) {
      os << ", final support " << set_text(r.final_support) << ", residual "
         << format_double(r.final_residual) << ", "
         << (r.recovered ? "recovered" : "FAILED");
    } else {
      os << ", full run skipped (N > K)";
    }
    os << "\n";
  }
  return os.str();
}

std::string CounterexampleReport::to_keyvalue() const {
  std::ostringstream os;
  os << "kind=counterexample_demo\n";
  os << "K=" << K << "\nN=" << N << "\n";
  os << "eigenvalues=" << join(eigenvalues) << "\n";
  os << "expected_eigenvalues=" << join(expected_eigenvalues) << "\n";
  os << "spectrum_error=" << format_double(spectrum_error) << "\n";
  os << "delta=" << format_double(delta) << "\n";
  os << "bound=" << format_double(bound) << "\n";
  os << "certified=" << yes_no(certified) << "\n";
  os << "beta1=" << format_double(beta1) << "\n";
  os << "alphaN=" << format_double(alphaN) << "\n";
  for (const PolicyRun& r : runs) {
    const std::string p = "policy." + r.policy + ".";
    os << p << "first_selection=" << join(r.first_selection) << "\n";
    os << p << "first_selection_hits_support=" << yes_no(r.first_selection_hits_support)
       << "\n";
    os << p << "ran_full_recovery=" << yes_no(r.ran_full_recovery) << "\n";
    if (r.ran_full_recovery) {
      os << p << "final_support=" << join(r.final_support) << "\n";
      os << p << "final_residual=" << format_double(r.final_residual) << "\n";
      os << p << "recovered=" << yes_no(r.recovered) << "\n";
    }
  }
  return os.str();
}

// ---- ensembles ------------------------------------------------------------------

Ensemble parse_ensemble(const std::string& name) {
  if (name == "gaussian") return Ensemble::kGaussian;
  if (name == "identity") return Ensemble::kIdentity;
  if (name == "perturbed_identity") return Ensemble::kPerturbedIdentity;
  if (name == "jittered_identity") return Ensemble::kJitteredIdentity;
  throw SpecError("ensemble", "unknown ensemble '" + name + "'");
}

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::kGaussian: return "gaussian";
    case Ensemble::kIdentity: return "identity";
    case Ensemble::kPerturbedIdentity: return "perturbed_identity";
    case Ensemble::kJitteredIdentity: return "jittered_identity";
  }
  return "?";
}

SensingMatrix ensemble_matrix(Ensemble e, std::size_t m, std::size_t n, double perturbation,
                              std::uint64_t seed) {
  switch (e) {
    case Ensemble::kGaussian:
      return gen_gaussian(m, n, seed);
    case Ensemble::kIdentity:
      if (m != n) throw SpecError("n", "identity ensemble needs m = n");
      return SensingMatrix(DenseMatrix::identity(n));
    case Ensemble::kPerturbedIdentity:
      if (n < m) throw SpecError("n", "perturbed identity ensemble needs n >= m");
      return gen_perturbed_identity(m, n - m, perturbation, seed);
    case Ensemble::kJitteredIdentity:
      if (m != n) throw SpecError("n", "jittered identity ensemble needs m = n");
      return gen_jittered_identity(m, perturbation, seed);
  }
  throw SpecError("ensemble", "unknown ensemble");
}

// ---- exhaustive recovery -------------------------------------------------------

ExhaustiveReport run_exhaustive_recovery(const ExhaustiveParams& p) {
  if (p.K == 0) throw SpecError("K", "must be >= 1");
  if (p.N == 0) throw SpecError("N", "must be >= 1");
  if (p.N > p.K) throw SpecError("N", "must not exceed K");
  if (p.N * p.K > p.m) throw SpecError("N", "must not exceed m/K");
  if (p.N * p.K + 1 > p.n) throw SpecError("n", "must be at least NK+1");
  if (p.draws_per_support == 0) throw SpecError("draws", "must be >= 1");
  const double supports = binomial(p.n, p.K);
  if (supports * static_cast<double>(p.draws_per_support) *
          static_cast<double>(p.seed_count) > 1e7) {
    throw GuardExceeded("exhaustive recovery would exceed 1e7 trials");
  }

  ExhaustiveReport rep;
  rep.params = p;
  rep.matrices.resize(p.seed_count);
  parallel_for(p.seed_count, p.workers, [&](std::size_t idx) {
    MatrixOutcome& out = rep.matrices[idx];
    out.index = idx;
    out.seed = derive_seed(p.master_seed, idx);
    const SensingMatrix a = ensemble_matrix(p.ensemble, p.m, p.n, p.perturbation, out.seed);
    out.certificate = certify(a, p.K, p.N, RicOptions{.workers = 1});

    IndexSet s(p.K);
    for (std::size_t j = 0; j < p.K; ++j) s[j] = j;
    std::uint64_t support_index = 0;
    while (true) {
      for (std::size_t d = 0; d < p.draws_per_support; ++d) {
        Rng rng(derive_seed(out.seed, support_index * p.draws_per_support + d));
        Vector values(p.K);
        for (double& v : values) v = rng.sign() * rng.uniform(0.5, 2.0);
        const Vector y = a.matrix().apply(signal_on(p.n, s, values));
        for (const TiePolicy& policy : {TiePolicy::lexicographic(), TiePolicy::adversarial(s)}) {
          GompParams gp;
          gp.K = p.K;
          gp.N = p.N;
          gp.epsilon = kRecoveryTolerance;
          gp.policy = policy;
          ++out.trials;
          try {
            const RecoveryResult res = gomp_recover(a, y, gp);
            if (covers(res.estimated_support, s) &&
                res.final_residual_norm <= kRecoveryTolerance) {
              ++out.successes;
            }
          } catch (const RankDeficient&) {
            // counts as a failed trial
          }
        }
      }
      ++support_index;
      std::size_t j = p.K;
      bool advanced = false;
      while (j > 0) {
        --j;
        if (s[j] < p.n - p.K + j) {
          ++s[j];
          for (std::size_t t = j + 1; t < p.K; ++t) s[t] = s[t - 1] + 1;
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
  });
  return rep;
}

bool ExhaustiveReport::certified_all_succeeded() const {
  return std::all_of(matrices.begin(), matrices.end(), [](const MatrixOutcome& mo) {
    return !mo.certificate.passes || mo.successes == mo.trials;
  });
}

std::string ExhaustiveReport::to_text() const {
  std::ostringstream os;
  const ExhaustiveParams& p = params;
  os << "Exhaustive recovery: " << to_string(p.ensemble) << " " << p.m << "x" << p.n
     << ", K=" << p.K << " N=" << p.N << ", " << p.seed_count << " matrices\n";
  std::size_t certified = 0;
  for (const MatrixOutcome& mo : matrices) {
    if (mo.certificate.passes) ++certified;
    os << "  matrix " << mo.index << ": delta=" << format_double(mo.certificate.delta)
       << " bound=" << format_double(mo.certificate.bound)
       << (mo.certificate.passes ? " certified" : " uncertified") << ", " << mo.successes
       << "/" << mo.trials << " recovered\n";
  }
  os << "  certified matrices: " << certified << "/" << matrices.size() << "\n";
  os << "  every certified matrix recovered every signal: "
     << yes_no(certified_all_succeeded()) << "\n";
  return os.str();
}

std::string ExhaustiveReport::to_keyvalue() const {
  std::ostringstream os;
  const ExhaustiveParams& p = params;
  os << "kind=exhaustive_recovery\n";
  os << "ensemble=" << to_string(p.ensemble) << "\nm=" << p.m << "\nn=" << p.n
     << "\nK=" << p.K << "\nN=" << p.N << "\nseeds=" << p.seed_count
     << "\nmaster_seed=" << p.master_seed << "\n";
  for (const MatrixOutcome& mo : matrices) {
    const std::string k = "matrix." + std::to_string(mo.index) + ".";
    os << k << "delta=" << format_double(mo.certificate.delta) << "\n";
    os << k << "certified=" << yes_no(mo.certificate.passes) << "\n";
    os << k << "trials=" << mo.trials << "\n";
    os << k << "successes=" << mo.successes << "\n";
  }
  os << "certified_all_succeeded=" << yes_no(certified_all_succeeded()) << "\n";
  return os.str();
}

// ---- phase transition ----------------------------------------------------------

std::vector<PhaseRow> run_phase_transition(const PhaseTransitionSpec& spec) {
  if (spec.m == 0) throw SpecError("m", "must be >= 1");
  if (spec.n == 0) throw SpecError("n", "must be >= 1");
  if (spec.K_min == 0 || spec.K_max < spec.K_min) throw SpecError("K", "empty or invalid K range");
  if (spec.N_values.empty()) throw SpecError("N", "at least one N is required");
  for (std::size_t nv : spec.N_values)
    if (nv == 0) throw SpecError("N", "must be >= 1");
  const double cells =
      static_cast<double>(spec.K_max - spec.K_min + 1) * static_cast<double>(spec.N_values.size());
  if (cells * static_cast<double>(spec.trials) > static_cast<double>(kMaxPhaseTrials)) {
    throw SpecError("trials", "grid exceeds " + std::to_string(kMaxPhaseTrials) + " trials");
  }

  std::vector<PhaseRow> rows;
  for (std::size_t K = spec.K_min; K <= spec.K_max; ++K) {
    for (std::size_t N : spec.N_values) {
      PhaseRow row{K, N, spec.m, spec.n, 0, 0};
      const bool feasible = N <= K && N * K <= spec.m && K <= spec.n && N <= spec.n;
      if (feasible && spec.trials > 0) {
        const std::uint64_t cell_seed = derive_seed(spec.master_seed, (K << 20) | N);
        std::vector<char> ok(spec.trials, 0);
        parallel_for(spec.trials, spec.workers, [&](std::size_t t) {
          const std::uint64_t seed = derive_seed(cell_seed, t);
          const SensingMatrix a =
              ensemble_matrix(spec.ensemble, spec.m, spec.n, spec.perturbation, seed);
          Rng rng(derive_seed(seed, 1));
          const IndexSet support = random_support(rng, spec.n, K);
          Vector values(K);
          for (double& v : values) v = rng.sign() * rng.uniform(0.5, 2.0);
          const Vector y = a.matrix().apply(signal_on(spec.n, support, values));
          GompParams gp;
          gp.K = K;
          gp.N = N;
          gp.epsilon = kRecoveryTolerance;
          try {
            const RecoveryResult res = gomp_recover(a, y, gp);
            ok[t] = covers(res.estimated_support, support) &&
                    res.final_residual_norm <= kRecoveryTolerance;
          } catch (const RankDeficient&) {
            ok[t] = 0;
          }
        });
        row.trials = spec.trials;
        row.successes = static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string phase_transition_csv(const std::vector<PhaseRow>& rows) {
  std::string out = kPhaseCsvHeader;
  out += '\n';
  for (const PhaseRow& r : rows) {
    out += std::to_string(r.K) + ',' + std::to_string(r.N) + ',' + std::to_string(r.m) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.trials) + ',' +
           std::to_string(r.successes) + ',';
    if (r.trials > 0) {
      out += format_double(static_cast<double>(r.successes) / static_cast<double>(r.trials));
    }
    out += '\n';
  }
  return out;
}

// ---- noise sweep --------------------------------------------------------------

NoiseSweepReport run_noise_sweep(const NoiseSweepSpec& spec) {
  if (spec.K == 0) throw SpecError("K", "must be >= 1");
  if (spec.N == 0 || spec.N > spec.K) throw SpecError("N", "must be in [1, K]");
  if (spec.N * spec.K > spec.m) throw SpecError("N", "must not exceed m/K");
  if (spec.N * spec.K + 1 > spec.n) throw SpecError("n", "must be at least NK+1");
  if (spec.epsilons.empty()) throw SpecError("epsilon", "at least one value is required");
  for (double e : spec.epsilons)
    if (!(e >= 0.0)) throw SpecError("epsilon", "must be >= 0");
  if (!spec.exploratory && !(spec.margin > 1.0)) {
    throw SpecError("margin", "must exceed 1 unless exploratory mode is enabled");
  }
  if (!(spec.margin > 0.0)) throw SpecError("margin", "must be positive");

  NoiseSweepReport rep;
  rep.spec = spec;
  const SensingMatrix a = ensemble_matrix(spec.ensemble, spec.m, spec.n, spec.perturbation,
                                          derive_seed(spec.master_seed, 0));
  rep.certificate = certify(a, spec.K, spec.N);
  if (!rep.certificate.passes) {
    throw HypothesisViolated("sweep matrix is not certified (delta " +
                             format_double(rep.certificate.delta) + " vs bound " +
                             format_double(rep.certificate.bound) + ")");
  }
  const TrialMode mode = spec.exploratory ? TrialMode::kExploratory : TrialMode::kStrict;

  for (std::size_t ei = 0; ei < spec.epsilons.size(); ++ei) {
    NoiseSweepRow row;
    row.epsilon = spec.epsilons[ei];
    const NoisySetup base = NoisySetup::from_certificate(rep.certificate, row.epsilon, 0);
    row.threshold = base.threshold;
    row.magnitude = base.threshold > 0.0 ? spec.margin * base.threshold : 1.0;
    std::vector<char> ok(spec.trials, 0);
    std::vector<std::size_t> spurious(spec.trials, 0);
    const std::uint64_t eps_seed = derive_seed(spec.master_seed, 1 + ei);
    parallel_for(spec.trials, spec.workers, [&](std::size_t t) {
      const std::uint64_t seed = derive_seed(eps_seed, t);
      Rng rng(seed);
      const IndexSet support = random_support(rng, spec.n, spec.K);
      Vector values(spec.K);
      for (double& v : values) v = rng.sign() * row.magnitude;
      NoisySetup setup = base;
      setup.seed = derive_seed(seed, 7);
      const TiePolicy policy =
          (t % 2 == 0) ? TiePolicy::lexicographic() : TiePolicy::adversarial(support);
      const TrialOutcome o = support_recovery_trial(a, setup, support, values, policy, mode);
      ok[t] = o.recovered;
      spurious[t] = o.spurious;
    });
    row.trials = spec.trials;
    row.successes = static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1));
    for (std::size_t s : spurious) row.spurious_total += s;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string NoiseSweepReport::to_text() const {
  std::ostringstream os;
  os << "Noise sweep: " << to_string(spec.ensemble) << " " << spec.m << "x" << spec.n
     << ", K=" << spec.K << " N=" << spec.N << ", delta=" << format_double(certificate.delta)
     << " bound=" << format_double(certificate.bound)
     << (spec.exploratory ? " [exploratory]" : "") << "\n";
  for (const NoiseSweepRow& r : rows) {
    os << "  epsilon=" << format_double(r.epsilon) << " threshold=" << format_double(r.threshold)
       << " |x_i|=" << format_double(r.magnitude) << ": " << r.successes << "/" << r.trials
       << " supports recovered, " << r.spurious_total << " spurious indices in total\n";
  }
  return os.str();
}

std::string NoiseSweepReport::to_keyvalue() const {
  std::ostringstream os;
  os << "kind=noise_sweep\n";
  os << "ensemble=" << to_string(spec.ensemble) << "\nm=" << spec.m << "\nn=" << spec.n
     << "\nK=" << spec.K << "\nN=" << spec.N << "\ndelta=" << format_double(certificate.delta)
     << "\nbound=" << format_double(certificate.bound)
     << "\nexploratory=" << yes_no(spec.exploratory) << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const NoiseSweepRow& r = rows[i];
    const std::string k = "row." + std::to_string(i) + ".";
    os << k << "epsilon=" << format_double(r.epsilon) << "\n";
    os << k << "threshold=" << format_double(r.threshold) << "\n";
    os << k << "magnitude=" << format_double(r.magnitude) << "\n";
    os << k << "trials=" << r.trials << "\n";
    os << k << "successes=" << r.successes << "\n";
    os << k << "spurious_total=" << r.spurious_total << "\n";
  }
  return os.str();
}

// ---- spec-driven experiments ------------------------------------------------------

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "exhaustive_recovery") return ExperimentKind::kExhaustiveRecovery;
  if (name == "counterexample_demo") return ExperimentKind::kCounterexampleDemo;
  if (name == "phase_transition") return ExperimentKind::kPhaseTransition;
  if (name == "noise_sweep") return ExperimentKind::kNoiseSweep;
  throw SpecError("kind", "unknown experiment kind '" + name + "'");
}

namespace {

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ParamReader {
 public:
  ParamReader(const std::map<std::string, std::string>& params,
              std::set<std::string> allowed)
      : params_(params) {
    for (const auto& [key, value] : params_) {
      if (!allowed.count(key)) throw SpecError(key, "unknown parameter for this kind");
    }
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    return parse_count(key, it->second);
  }

  std::uint64_t seed(const std::string& key, std::uint64_t fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    std::uint64_t v = 0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw SpecError(key, "expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    return parse_real(key, it->second);
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw SpecError(key, "expected true or false");
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  std::vector<std::size_t> counts(const std::string& key,
                                  std::vector<std::size_t> fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    std::vector<std::size_t> out;
    for (const std::string& item : split(it->second)) out.push_back(parse_count(key, item));
    if (out.empty()) throw SpecError(key, "empty list");
    return out;
  }

  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    std::vector<double> out;
    for (const std::string& item : split(it->second)) out.push_back(parse_real(key, item));
    if (out.empty()) throw SpecError(key, "empty list");
    return out;
  }

 private:
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim_copy(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  static std::size_t parse_count(const std::string& key, const std::string& s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw SpecError(key, "expected a non-negative integer, got '" + s + "'");
    }
    return v;
  }

  static double parse_real(const std::string& key, const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw SpecError(key, "expected a real number, got '" + s + "'");
    }
    return v;
  }

  const std::map<std::string, std::string>& params_;
};

}  // namespace

ExperimentSpec ExperimentSpec::parse(const std::string& text) {
  ExperimentSpec spec;
  bool have_kind = false;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim_copy(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, 1, "expected 'key = value'");
    }
    const std::string key = trim_copy(line.substr(0, eq));
    const std::string value = trim_copy(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, 1, "empty key");
    if (key == "kind") {
      spec.kind = parse_experiment_kind(value);
      have_kind = true;
    } else if (key == "out") {
      spec.output_path = value;
    } else {
      spec.parameters[key] = value;
    }
  }
  if (!have_kind) throw SpecError("kind", "missing");
  return spec;
}

ExperimentSpec ExperimentSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  ExperimentOutput out;
  const auto& params = spec.parameters;
  switch (spec.kind) {
    case ExperimentKind::kCounterexampleDemo: {
      const ParamReader r(params, {"K", "N"});
      const std::size_t K = r.count("K", 2);
      const std::size_t N = r.count("N", 1);
      if (K == 0) throw SpecError("K", "must be >= 1");
      if (N == 0) throw SpecError("N", "must be >= 1");
      const CounterexampleReport rep = run_counterexample_demo(K, N);
      out.summary = rep.to_text();
      out.document = rep.to_keyvalue();
      break;
    }
    case ExperimentKind::kExhaustiveRecovery: {
      const ParamReader r(params, {"m", "n", "K", "N", "seeds", "seed", "draws", "ensemble",
                                   "perturbation", "workers"});
      ExhaustiveParams p;
      p.m = r.count("m", p.m);
      p.n = r.count("n", p.n);
      p.K = r.count("K", p.K);
      p.N = r.count("N", p.N);
      p.seed_count = r.count("seeds", p.seed_count);
      p.master_seed = r.seed("seed", p.master_seed);
      p.draws_per_support = r.count("draws", p.draws_per_support);
      p.ensemble = parse_ensemble(r.text("ensemble", "gaussian"));
      p.perturbation = r.real("perturbation", p.perturbation);
      p.workers = static_cast<unsigned>(r.count("workers", 0));
      const ExhaustiveReport rep = run_exhaustive_recovery(p);
      out.summary = rep.to_text();
      out.document = rep.to_keyvalue();
      break;
    }
    case ExperimentKind::kPhaseTransition: {
      const ParamReader r(params, {"m", "n", "K", "K_min", "K_max", "N", "trials", "seed",
                                   "ensemble", "perturbation", "workers"});
      PhaseTransitionSpec p;
      p.m = r.count("m", p.m);
      p.n = r.count("n", p.n);
      if (params.count("K")) {
        p.K_min = p.K_max = r.count("K", 1);
      }
      p.K_min = r.count("K_min", p.K_min);
      p.K_max = r.count("K_max", p.K_max);
      p.N_values = r.counts("N", p.N_values);
      p.trials = r.count("trials", p.trials);
      p.master_seed = r.seed("seed", p.master_seed);
      p.ensemble = parse_ensemble(r.text("ensemble", "gaussian"));
      p.perturbation = r.real("perturbation", p.perturbation);
      p.workers = static_cast<unsigned>(r.count("workers", 0));
      const std::vector<PhaseRow> rows = run_phase_transition(p);
      out.document = phase_transition_csv(rows);
      std::ostringstream os;
      os << "Phase transition: " << to_string(p.ensemble) << " " << p.m << "x" << p.n << ", "
         << rows.size() << " cells\n";
      for (const PhaseRow& row : rows) {
        os << "  K=" << row.K << " N=" << row.N << ": " << row.successes << "/" << row.trials
           << "\n";
      }
      out.summary = os.str();
      break;
    }
    case ExperimentKind::kNoiseSweep: {
      const ParamReader r(params, {"m", "n", "K", "N", "epsilon", "trials", "seed", "ensemble",
                                   "perturbation", "margin", "exploratory", "workers"});
      NoiseSweepSpec p;
      p.m = r.count("m", p.m);
      p.n = r.count("n", p.n);
      p.K = r.count("K", p.K);
      p.N = r.count("N", p.N);
      p.epsilons = r.reals("epsilon", p.epsilons);
      p.trials = r.count("trials", p.trials);
      p.master_seed = r.seed("seed", p.master_seed);
      p.ensemble = parse_ensemble(r.text("ensemble", "identity"));
      p.perturbation = r.real("perturbation", p.perturbation);
      p.margin = r.real("margin", p.margin);
      p.exploratory = r.flag("exploratory", p.exploratory);
      p.workers = static_cast<unsigned>(r.count("workers", 0));
      const NoiseSweepReport rep = run_noise_sweep(p);
      out.summary = rep.to_text();
      out.document = rep.to_keyvalue();
      break;
    }
  }
  if (!spec.output_path.empty()) write_text_file(spec.output_path, out.document);
  return out;
}

}  // namespace gompcert
