// Command-line front end: matrix generation, RIC certification, single
// recoveries, the counterexample demo and spec-driven experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gompcert/errors.hpp"
#include "gompcert/gomp.hpp"
#include "gompcert/harness.hpp"
#include "gompcert/ric.hpp"
#include "gompcert/sensing.hpp"

namespace {

using namespace gompcert;

constexpr int kExitOk = 0;

std::string join_indices(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + out_path + "' for writing");
  f << text;
}

struct GenArgs {
  std::string kind;
  std::size_t m = 0, n = 0, K = 1, N = 1;
  std::uint64_t seed = 1;
  double perturbation = 1.0;
  std::string out;
};

int run_gen(const GenArgs& g) {
  std::optional<SensingMatrix> a;
  if (g.kind == "counterexample") {
    a = gen_counterexample(g.K, g.N);
  } else {
    if (g.m == 0) throw InvalidArgument("--m is required for '" + g.kind + "'");
    const std::size_t n = g.n == 0 ? g.m : g.n;
    a = ensemble_matrix(parse_ensemble(g.kind), g.m, n, g.perturbation, g.seed);
  }
  if (g.out.empty()) {
    const DenseMatrix& mat = a->matrix();
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      for (std::size_t c = 0; c < mat.cols(); ++c) {
        if (c) std::cout << ',';
        std::cout << format_double(mat(r, c));
      }
      std::cout << '\n';
    }
  } else {
    save_csv(*a, g.out);
    std::cerr << "wrote " << a->rows() << "x" << a->cols() << " matrix to " << g.out << '\n';
  }
  return kExitOk;
}

struct RicArgs {
  std::string matrix;
  std::size_t K = 1, N = 1, order = 0;
  unsigned workers = 0;
  std::string out;
};

int run_ric(const RicArgs& r) {
  const SensingMatrix a = load_csv(r.matrix);
  RicOptions opts;
  opts.workers = r.workers;
  std::ostringstream os;
  os.precision(17);
  if (r.order != 0) {
    const RicDetails d = ric_details(a, r.order, opts);
    os << "order=" << r.order << "\ndelta=" << d.delta << "\nlambda_min=" << d.lambda_min
       << "\nlambda_max=" << d.lambda_max << "\nworst_subset=" << join_indices(d.worst_subset)
       << "\nsubsets_examined=" << d.subsets_examined << '\n';
  } else {
    const RicCertificate c = certify(a, r.K, r.N, opts);
    os << "K=" << c.K << "\nN=" << c.N << "\norder=" << c.order << "\ndelta=" << c.delta
       << "\nbound=" << c.bound << "\npasses=" << (c.passes ? "true" : "false")
       << "\nsubsets_examined=" << c.subsets_examined << '\n';
  }
  emit(os.str(), r.out);
  return kExitOk;
}

struct RecoverArgs {
  std::string matrix, measurements;
  std::size_t K = 1, N = 1;
  double epsilon = 1e-8;
  std::string policy = "lex";
  std::vector<std::size_t> support;
  std::string out;
};

int run_recover(const RecoverArgs& r) {
  const SensingMatrix a = load_csv(r.matrix);
  const Vector y = load_vector_csv(r.measurements);
  GompParams p;
  p.K = r.K;
  p.N = r.N;
  p.epsilon = r.epsilon;
  if (!r.support.empty()) p.true_support = r.support;
  if (r.policy == "adversarial") {
    if (r.support.empty()) throw InvalidArgument("--policy adversarial needs --support");
    p.policy = TiePolicy::adversarial(r.support);
  }
  const RecoveryResult res = gomp_recover(a, y, p);

  std::cout.precision(17);
  std::cout << "policy=" << p.policy.name() << "\niterations=" << res.iterations.size()
            << "\ntermination=" << to_string(res.termination)
            << "\nestimated_support=" << join_indices(res.estimated_support)
            << "\nfinal_residual_norm=" << res.final_residual_norm << '\n';
  for (std::size_t k = 0; k < res.iterations.size(); ++k) {
    const IterationRecord& rec = res.iterations[k];
    std::cout << "iteration." << k + 1 << ".selected=" << join_indices(rec.selected) << '\n'
              << "iteration." << k + 1 << ".residual_norm=" << rec.residual_norm_after << '\n';
    if (rec.beta1)
      std::cout << "iteration." << k + 1 << ".beta1=" << *rec.beta1 << '\n'
                << "iteration." << k + 1 << ".alphaN=" << *rec.alphaN << '\n';
  }
  if (!r.out.empty()) save_vector_csv(res.signal(a.cols()), r.out);
  return kExitOk;
}

struct DemoArgs {
  std::size_t K = 2, N = 1;
  std::string format = "text";
  std::string out;
};

int run_demo(const DemoArgs& d) {
  const CounterexampleReport rep = run_counterexample_demo(d.K, d.N);
  emit(d.format == "kv" ? rep.to_keyvalue() : rep.to_text(), d.out);
  return kExitOk;
}

struct ExperimentArgs {
  std::string spec;
  std::string out;
};

int run_experiment_verb(const ExperimentArgs& e) {
  ExperimentSpec spec = ExperimentSpec::load(e.spec);
  if (!e.out.empty()) spec.output_path = e.out;
  const ExperimentOutput out = run_experiment(spec);
  std::cout << out.summary;
  if (spec.output_path.empty()) std::cout << out.document;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gOMP recovery and restricted isometry certification toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a sensing matrix as CSV");
  gen_cmd->add_option("kind", gen.kind,
                      "gaussian | counterexample | identity | perturbed_identity | "
                      "jittered_identity")
      ->required();
  gen_cmd->add_option("--m", gen.m, "Rows");
  gen_cmd->add_option("--n", gen.n, "Columns (defaults to m)");
  gen_cmd->add_option("--K", gen.K, "Sparsity (counterexample)");
  gen_cmd->add_option("--N", gen.N, "Indices per iteration (counterexample)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--perturbation", gen.perturbation, "Perturbation strength");
  gen_cmd->add_option("--out", gen.out, "Output CSV (stdout when omitted)");

  RicArgs ric;
  auto* ric_cmd = app.add_subcommand("ric", "Exact RIC and recovery certificate");
  ric_cmd->add_option("matrix", ric.matrix, "Matrix CSV")->required();
  ric_cmd->add_option("--K", ric.K, "Sparsity");
  ric_cmd->add_option("--N", ric.N, "Indices per iteration");
  ric_cmd->add_option("--order", ric.order, "Report the RIC of this order instead");
  ric_cmd->add_option("--workers", ric.workers, "Worker threads (0 = all cores)");
  ric_cmd->add_option("--out", ric.out, "Write the report here");

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "Run gOMP on one instance");
  rec_cmd->add_option("matrix", rec.matrix, "Matrix CSV")->required();
  rec_cmd->add_option("measurements", rec.measurements, "Measurement vector CSV")->required();
  rec_cmd->add_option("--K", rec.K, "Sparsity");
  rec_cmd->add_option("--N", rec.N, "Indices per iteration");
  rec_cmd->add_option("--epsilon", rec.epsilon, "Residual stopping threshold");
  rec_cmd->add_option("--policy", rec.policy, "Tie policy")
      ->check(CLI::IsMember({"lex", "adversarial"}));
  rec_cmd->add_option("--support", rec.support, "True support, 0-based (comma separated)")
      ->delimiter(',');
  rec_cmd->add_option("--out", rec.out, "Write the recovered signal as CSV");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "Sharpness counterexample report");
  demo_cmd->add_option("--K", demo.K, "Sparsity");
  demo_cmd->add_option("--N", demo.N, "Indices per iteration");
  demo_cmd->add_option("--format", demo.format, "text | kv")
      ->check(CLI::IsMember({"text", "kv"}));
  demo_cmd->add_option("--out", demo.out, "Write the report here");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment spec file");
  exp_cmd->add_option("spec", exp.spec, "Spec file (key = value lines)")->required();
  exp_cmd->add_option("--out", exp.out, "Override the spec's output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ErrorClass::kValidation);
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*ric_cmd) return run_ric(ric);
    if (*rec_cmd) return run_recover(rec);
    if (*demo_cmd) return run_demo(demo);
    if (*exp_cmd) return run_experiment_verb(exp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kValidation);
  }
  return kExitOk;
}
