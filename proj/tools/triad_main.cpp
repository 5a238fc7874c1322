// triad: consistency checking of (docstring, annotations, code) triples and
// the finite-world analysis of the single-edge acceptance bounds.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "triad/analytical/model.hpp"
#include "triad/analytical/report.hpp"
#include "triad/backends/descriptor.hpp"
#include "triad/dataset/loader.hpp"
#include "triad/engine/engine.hpp"
#include "triad/report/report.hpp"

using namespace triad;
namespace fs = std::filesystem;

namespace {

constexpr int kExitBackendError = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBadConfig = 3;

std::string read_file_or_exit(const fs::path& p) {
  std::ifstream in(p);
  if (!in.good()) {
    std::cerr << "cannot open " << p << "\n";
    std::exit(kExitBadInput);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CheckOptions {
  std::string dataset;
  std::string backend = "scripted";
  std::string verifier = "minilang";
  std::string fixtures;
  std::string world;
  std::string external_cmd;
  std::string endpoint, model;
  std::string token_env = "TRIAD_API_TOKEN";
  int k = 1, m = 3, jobs = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "table";
};

int cmd_check(const CheckOptions& opt) {
  dataset::LoadedDataset ds;
  try {
    ds = dataset::load_dataset(opt.dataset);
  } catch (const std::exception& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitBadInput;
  }
  for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";

  std::unique_ptr<backends::Backend> generator;
  std::unique_ptr<backends::VerifierAdapter> verifier;
  try {
    backends::BackendDescriptor descriptor;
    if (opt.backend == "scripted") {
      if (opt.fixtures.empty())
        throw StructuralError("--backend scripted requires --fixtures");
      descriptor = backends::ScriptedDescriptor{opt.fixtures};
    } else if (opt.backend == "sampler") {
      if (opt.world.empty()) throw StructuralError("--backend sampler requires --world");
      descriptor = backends::SamplerDescriptor{opt.world};
    } else if (opt.backend == "http") {
      backends::HttpBackendConfig cfg;
      cfg.endpoint = !opt.endpoint.empty() ? opt.endpoint
                                           : (std::getenv("TRIAD_ENDPOINT")
                                                  ? std::getenv("TRIAD_ENDPOINT")
                                                  : "");
      cfg.model = !opt.model.empty()
                      ? opt.model
                      : (std::getenv("TRIAD_MODEL") ? std::getenv("TRIAD_MODEL") : "");
      cfg.token_env_var = opt.token_env;
      descriptor = cfg;
    } else {
      throw StructuralError("unknown backend: " + opt.backend);
    }
    generator = backends::make_backend(descriptor);
    if (opt.verifier == "minilang") {
      verifier = std::make_unique<backends::MiniLangAdapter>(minilang::InputGrid{});
    } else if (opt.verifier == "external") {
      backends::ExternalProcessConfig cfg;
      cfg.command = opt.external_cmd;
      verifier = std::make_unique<backends::ExternalProcessAdapter>(cfg);
    } else {
      throw StructuralError("unknown verifier: " + opt.verifier);
    }
  } catch (const std::exception& e) {
    std::cerr << "backend configuration error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  engine::EngineBackends eb;
  eb.generator = generator.get();
  eb.verifier = verifier.get();

  EngineConfig cfg;
  cfg.k = opt.k;
  cfg.m = opt.m;
  cfg.seed = opt.seed;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitBadConfig;
  }

  std::vector<ConsistencyVerdict> verdicts;
  try {
    verdicts = engine::run_dataset(ds.instances, cfg, eb, opt.jobs);
  } catch (const std::exception& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return kExitBackendError;
  }

  std::vector<report::VerdictRecord> records;
  bool backend_errors = false;
  for (ConsistencyVerdict& v : verdicts) {
    for (CheckKind kind : kAllCheckKinds)
      if (v.result(kind).failure_reason == FailureReason::BackendError) backend_errors = true;
    records.push_back({std::move(v), cfg.k, cfg.m, cfg.seed});
  }

  fs::create_directories(opt.out_dir);
  std::ofstream(fs::path(opt.out_dir) / "verdicts.jsonl") << report::to_jsonl(records);
  report::ReportMatrix mat = report::ReportMatrix::build(records);
  if (opt.format == "csv") {
    std::ofstream(fs::path(opt.out_dir) / "report.csv") << mat.render_csv();
  } else if (opt.format == "json") {
    std::ofstream(fs::path(opt.out_dir) / "report.json") << mat.render_json().dump(2) << "\n";
  } else {
    std::ofstream(fs::path(opt.out_dir) / "report.txt") << mat.render_table();
  }
  std::cout << report::render_summary(records) << "\n" << mat.render_table();
  if (backend_errors) {
    std::cerr << "backend errors occurred; see verdicts.jsonl transcripts\n";
    return kExitBackendError;
  }
  return 0;
}

struct AnalyzeOptions {
  std::string world;
  std::string l = "0.8";
  std::string u = "0.1";
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  std::vector<int> k_list = {1, 10};
};

int cmd_analyze(const AnalyzeOptions& opt) {
  using analytical::Rational;
  analytical::WorldBundle<Rational> bundle;
  try {
    bundle = analytical::load_world_text<Rational>(read_file_or_exit(opt.world));
  } catch (const std::exception& e) {
    std::cerr << "world error: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (auto v = analytical::validate_relation(bundle.world)) {
    std::cerr << "consistency relation violates " << v->property << " at (" << v->x << ", "
              << v->y << ") vs (" << v->x2 << ", " << v->y2 << ")\n";
    return kExitBadInput;
  }
  auto rat = analytical::is_transfer_rational(bundle.model, bundle.world);
  if (!rat.ok) {
    std::cerr << "model is not transfer-rational: tie at " << rat.offending_x << "\n";
    return kExitBadInput;
  }

  Rational l, u;
  try {
    l = analytical::parse_rational(opt.l);
    u = analytical::parse_rational(opt.u);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadConfig;
  }

  auto show = [](const analytical::ProbValue<Rational>& p) {
    return p.vacuous ? std::string("vacuous") : p.value.str() + " = " +
                                                    std::to_string(analytical::to_double(p.value));
  };
  auto params = analytical::measure_params(bundle.world, bundle.model, l, u);
  auto bounds = analytical::theorem_bounds(params);
  auto exact = analytical::exact_accept_prob(bundle.world, bundle.model);

  std::cout << "assumption parameters (l=" << l.str() << ", u=" << u.str() << "):\n";
  std::cout << "  c1   = " << show(params.c1) << "\n  c0   = " << show(params.c0) << "\n";
  std::cout << "  p_c1 = " << show(params.p_c1) << "\n  p_c2 = " << show(params.p_c2) << "\n";
  std::cout << "acceptance bounds:\n";
  std::cout << "  A_lower = " << bounds.a_lower.str() << " = "
            << analytical::to_double(bounds.a_lower) << "\n";
  std::cout << "  R_upper = " << bounds.r_upper.str() << " = "
            << analytical::to_double(bounds.r_upper) << "\n";
  std::cout << "exact acceptance:\n";
  std::cout << "  P(accept | consistent)   = " << show(exact.given_g) << "\n";
  std::cout << "  P(accept | inconsistent) = " << show(exact.given_not_g) << "\n";

  auto dbl = analytical::to_double_bundle(bundle);
  auto mc = analytical::monte_carlo_accept(dbl.world, dbl.model, opt.trials, opt.seed);
  auto show_mc = [](const analytical::MonteCarloEstimate& e) {
    return e.vacuous ? std::string("vacuous")
                     : std::to_string(e.estimate) + " (se " + std::to_string(e.standard_error) +
                           ")";
  };
  std::cout << "monte carlo (" << opt.trials << " trials, seed " << opt.seed << "):\n";
  std::cout << "  P(accept | consistent)   = " << show_mc(mc.given_g) << "\n";
  std::cout << "  P(accept | inconsistent) = " << show_mc(mc.given_not_g) << "\n";

  std::cout << "k-amplification:\n";
  for (int k : opt.k_list) {
    std::cout << "  k=" << k;
    if (!exact.given_g.vacuous)
      std::cout << "  accept|consistent = "
                << analytical::to_double(analytical::k_amplified(exact.given_g.value, k));
    if (!exact.given_not_g.vacuous)
      std::cout << "  accept|inconsistent = "
                << analytical::to_double(analytical::k_amplified(exact.given_not_g.value, k));
    std::cout << "\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& files, const std::string& format) {
  std::vector<report::VerdictRecord> records;
  for (const std::string& f : files) {
    try {
      auto part = report::from_jsonl(read_file_or_exit(f));
      records.insert(records.end(), part.begin(), part.end());
    } catch (const std::exception& e) {
      std::cerr << f << ": " << e.what() << "\n";
      return kExitBadInput;
    }
  }
  if (records.empty()) {
    std::cout << "(no verdicts)\n";
    return 0;
  }
  report::ReportMatrix mat = report::ReportMatrix::build(records);
  std::cout << report::render_summary(records) << "\n";
  if (format == "csv") std::cout << mat.render_csv();
  else if (format == "json") std::cout << mat.render_json().dump(2) << "\n";
  else std::cout << mat.render_table();
  std::vector<ConsistencyVerdict> verdicts;
  for (const auto& r : records) verdicts.push_back(r.verdict);
  std::cout << "\nper-edge acceptance rates:\n"
            << analytical::render_edge_rates(analytical::edge_rate_table(verdicts));
  return 0;
}

int cmd_validate(const std::string& dataset_path) {
  try {
    dataset::LoadedDataset ds = dataset::load_dataset(dataset_path);
    for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";
    auto failures = dataset::audit_variants(ds.instances, minilang::InputGrid{});
    for (const std::string& f : failures) std::cerr << "audit: " << f << "\n";
    if (!failures.empty()) return kExitBadInput;
    std::cout << ds.instances.size() << " instances OK\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

int cmd_emit_template(const std::string& dataset_path, const std::string& instance,
                      const std::vector<std::string>& gen_pre,
                      const std::vector<std::string>& gen_post, const std::string& out) {
  try {
    dataset::LoadedDataset ds = dataset::load_dataset(dataset_path);
    for (const Instance& inst : ds.instances) {
      if (inst.name != instance) continue;
      // Default to the instance's own annotations: the filled template is
      // then the self-equivalence check, which must always verify.
      auto tmpl = equivalence::build_anno_equiv_template(
          inst, gen_pre.empty() && gen_post.empty() ? inst.preconditions : gen_pre,
          gen_pre.empty() && gen_post.empty() ? inst.postconditions : gen_post,
          inst.template_skeleton);
      if (out.empty()) {
        std::cout << tmpl.text;
      } else {
        std::ofstream(out) << tmpl.text;
      }
      return 0;
    }
    std::cerr << "no instance named " << instance << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"six-edge consistency checker and analytical model"};
  app.require_subcommand(1);

  CheckOptions check;
  CLI::App* c = app.add_subcommand("check", "run the six checks over a dataset");
  c->add_option("--dataset", check.dataset, "dataset root directory")->required();
  c->add_option("--backend", check.backend, "scripted|sampler|http");
  c->add_option("--verifier", check.verifier, "minilang|external");
  c->add_option("--fixtures", check.fixtures, "fixture file for the scripted backend");
  c->add_option("--world", check.world, "world file for the sampler backend");
  c->add_option("--external-cmd", check.external_cmd,
                "external verifier command template ({file}, {timeout_s})");
  c->add_option("--endpoint", check.endpoint, "http backend endpoint URL");
  c->add_option("--model", check.model, "http backend model name");
  c->add_option("--token-env", check.token_env,
                "environment variable holding the bearer token (value never logged)");
  c->add_option("--k", check.k, "independent repetitions per check");
  c->add_option("--m", check.m, "feedback tries per generation loop");
  c->add_option("--seed", check.seed, "base seed");
  c->add_option("--jobs", check.jobs, "parallel instances");
  c->add_option("--out", check.out_dir, "output directory for verdicts and report");
  c->add_option("--format", check.format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  AnalyzeOptions an;
  CLI::App* a = app.add_subcommand("analyze", "analytical model on a world file");
  a->add_option("--world", an.world, "world JSON file")->required();
  a->add_option("--l", an.l, "concentration threshold l in (0,1]");
  a->add_option("--u", an.u, "concentration threshold u in [0,1)");
  a->add_option("--trials", an.trials, "Monte Carlo trials");
  a->add_option("--seed", an.seed, "Monte Carlo seed");
  a->add_option("--k-list", an.k_list, "k values for amplification curves");

  std::vector<std::string> report_files;
  std::string report_format = "table";
  CLI::App* r = app.add_subcommand("report", "merge verdict files into summary tables");
  r->add_option("--verdicts", report_files, "verdict JSONL files")->required();
  r->add_option("--format", report_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));

  std::string validate_path;
  CLI::App* v = app.add_subcommand("validate-dataset", "load and audit a dataset");
  v->add_option("--dataset", validate_path, "dataset root directory")->required();

  std::string et_dataset, et_instance, et_out;
  std::vector<std::string> et_pre, et_post;
  CLI::App* t = app.add_subcommand("emit-template",
                                   "write the instantiated annotation-equivalence template");
  t->add_option("--dataset", et_dataset, "dataset root directory")->required();
  t->add_option("--instance", et_instance, "instance name")->required();
  t->add_option("--gen-pre", et_pre, "generated precondition clause (repeatable)");
  t->add_option("--gen-post", et_post, "generated postcondition clause (repeatable)");
  t->add_option("--out", et_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (c->parsed()) return cmd_check(check);
  if (a->parsed()) return cmd_analyze(an);
  if (r->parsed()) return cmd_report(report_files, report_format);
  if (v->parsed()) return cmd_validate(validate_path);
  if (t->parsed()) return cmd_emit_template(et_dataset, et_instance, et_pre, et_post, et_out);
  return 0;
}
