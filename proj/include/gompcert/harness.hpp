#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gompcert/densela.hpp"
#include "gompcert/gomp.hpp"
#include "gompcert/ric.hpp"
#include "gompcert/sensing.hpp"

namespace gompcert {

// ---- counterexample demo -----------------------------------------------------

inline constexpr std::size_t kDemoMaxSize = 64;

struct PolicyRun {
  std::string policy;
  IndexSet first_selection;
  bool first_selection_hits_support = false;
  // False when N > K, where gOMP's input condition fails and only the first
  // identification step is evaluated.
  bool ran_full_recovery = false;
  IndexSet final_support;
  double final_residual = 0;
  bool recovered = false;  // T subset of final support and residual <= 1e-8
};

struct CounterexampleReport {
  std::size_t K = 0;
  std::size_t N = 0;
  Vector eigenvalues;           // Jacobi, ascending
  Vector expected_eigenvalues;  // closed form, ascending
  double spectrum_error = 0;    // max abs difference
  double delta = 0;
  double bound = 0;
  bool certified = false;
  double beta1 = 0;
  double alphaN = 0;
  std::vector<PolicyRun> runs;  // lexicographic, adversarial

  std::string to_text() const;
  std::string to_keyvalue() const;
};

// Builds the sharpness counterexample, checks its spectrum against the
// closed form (throws VerificationFailed beyond 1e-10), computes delta and
// the first-iteration margins for x = 1 on the first K coordinates, and runs
// gOMP under both tie policies. Requires NK+1 <= kDemoMaxSize.
CounterexampleReport run_counterexample_demo(std::size_t K, std::size_t N);

// ---- exhaustive recovery -------------------------------------------------------

enum class Ensemble { kGaussian, kIdentity, kPerturbedIdentity, kJitteredIdentity };

Ensemble parse_ensemble(const std::string& name);
std::string to_string(Ensemble e);

struct ExhaustiveParams {
  std::size_t m = 10;
  std::size_t n = 12;
  std::size_t K = 2;
  std::size_t N = 1;
  std::size_t seed_count = 20;
  std::uint64_t master_seed = 1;
  std::size_t draws_per_support = 1;
  Ensemble ensemble = Ensemble::kGaussian;
  double perturbation = 1.0;  // perturbed and jittered identities only
  unsigned workers = 0;
};

struct MatrixOutcome {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  RicCertificate certificate;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

struct ExhaustiveReport {
  ExhaustiveParams params;
  std::vector<MatrixOutcome> matrices;

  // Every certified matrix recovered every trial.
  bool certified_all_succeeded() const;
  std::string to_text() const;
  std::string to_keyvalue() const;
};

// For each matrix of the ensemble: certify; then run gOMP (epsilon = 1e-8,
// both tie policies) on every support of size K with random coefficients of
// magnitude in [0.5, 2] and random signs. Success is T subset of Lambda with
// residual <= 1e-8.
ExhaustiveReport run_exhaustive_recovery(const ExhaustiveParams& params);

// Builds the ensemble member used for matrix `index`.
SensingMatrix ensemble_matrix(Ensemble e, std::size_t m, std::size_t n,
                              double perturbation, std::uint64_t seed);

// ---- phase transition ----------------------------------------------------------

inline constexpr std::uint64_t kMaxPhaseTrials = 1'000'000;

struct PhaseTransitionSpec {
  std::size_t m = 20;
  std::size_t n = 40;
  std::size_t K_min = 1;
  std::size_t K_max = 5;
  std::vector<std::size_t> N_values{1};
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  Ensemble ensemble = Ensemble::kGaussian;
  double perturbation = 1.0;
  unsigned workers = 0;
};

struct PhaseRow {
  std::size_t K = 0;
  std::size_t N = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
};

inline constexpr const char* kPhaseCsvHeader = "K,N,m,n,trials,successes,success_rate";

// One row per (K, N) cell. Cells violating N <= K, NK <= m or K <= n get
// zero trials.
std::vector<PhaseRow> run_phase_transition(const PhaseTransitionSpec& spec);
std::string phase_transition_csv(const std::vector<PhaseRow>& rows);

// ---- noise sweep --------------------------------------------------------------

struct NoiseSweepSpec {
  std::size_t m = 8;
  std::size_t n = 8;
  std::size_t K = 2;
  std::size_t N = 1;
  std::vector<double> epsilons{0.05, 0.1};
  std::size_t trials = 100;
  std::uint64_t master_seed = 1;
  Ensemble ensemble = Ensemble::kIdentity;
  double perturbation = 1.0;
  double margin = 1.01;       // magnitudes = margin * threshold
  bool exploratory = false;   // allow margin <= 1 and report only
  unsigned workers = 0;
};

struct NoiseSweepRow {
  double epsilon = 0;
  double threshold = 0;
  double magnitude = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t spurious_total = 0;
};

struct NoiseSweepReport {
  NoiseSweepSpec spec;
  RicCertificate certificate;
  std::vector<NoiseSweepRow> rows;

  std::string to_text() const;
  std::string to_keyvalue() const;
};

// Throws HypothesisViolated if the matrix does not certify.
NoiseSweepReport run_noise_sweep(const NoiseSweepSpec& spec);

// ---- spec-driven experiments ------------------------------------------------------

enum class ExperimentKind { kExhaustiveRecovery, kCounterexampleDemo, kPhaseTransition, kNoiseSweep };

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kCounterexampleDemo;
  std::map<std::string, std::string> parameters;
  std::filesystem::path output_path;

  // "key = value" lines; '#' starts a comment. Recognized keys besides the
  // parameters: kind, out.
  static ExperimentSpec parse(const std::string& text);
  static ExperimentSpec load(const std::filesystem::path& path);
};

ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentOutput {
  std::string summary;   // human-readable
  std::string document;  // key-value, or CSV for phase_transition
};

// Validates the parameters for the kind (SpecError names the bad field),
// runs it, and writes `document` to output_path when one is set.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

}  // namespace gompcert
