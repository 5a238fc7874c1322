// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
// Every tolerance is pinned here, in code. Criteria:
//   1. acceptance bounds hold exactly on 200 randomized rational worlds (<60s)
//   2. Monte Carlo within 4 standard errors of exact on 20 worlds, n=100000 (<60s)
//   3. worked example: exact (0.85, 0.10), bounds (0.80, 0.10) at l=0.8, u=0.1
//   4. sampler edge at k=10 over >=2000 instances matches 1-(1-p)^10 within 3 sigma
//   5. bundled corpus: 100% ground-truth accepts, 0% variant accepts, at k=1
//      and k=10; every C2/C3/C6 variant passes the soundness gate (<30s)
//   6. instantiated equivalence template byte-identical to the checked-in golden
//   7. report cells render "45/60 (75%)" and "52/60 (87%)"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "triad/analytical/model.hpp"
#include "triad/analytical/random_world.hpp"
#include "triad/backends/sampler.hpp"
#include "triad/backends/scripted.hpp"
#include "triad/dataset/loader.hpp"
#include "triad/engine/engine.hpp"
#include "triad/equivalence/anno_template.hpp"
#include "triad/report/report.hpp"

using namespace triad;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report_line(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail << "\n";
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = std::string(TRIAD_SOURCE_DIR) + "/data";

// --- criterion 1: Theorem bounds on 200 randomized transfer-rational worlds --

void criterion_1() {
  using analytical::Rational;
  auto t0 = Clock::now();
  int violations = 0, checked_a = 0, checked_r = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto rw = analytical::generate_random_world<Rational>(i * 1'000'003 + 17);
    const auto& w = rw.bundle.world;
    const auto& m = rw.bundle.model;
    auto params = analytical::measure_params(w, m, rw.l, rw.u);
    auto bounds = analytical::theorem_bounds(params);
    auto exact = analytical::exact_accept_prob(w, m);
    if (!exact.given_g.vacuous) {
      ++checked_a;
      if (!(exact.given_g.value >= bounds.a_lower)) ++violations;
    }
    if (!exact.given_not_g.vacuous) {
      ++checked_r;
      if (!(exact.given_not_g.value <= bounds.r_upper)) ++violations;
    }
  }
  double secs = seconds_since(t0);
  bool ok = violations == 0 && checked_a >= 100 && checked_r >= 100 && secs < 60.0;
  std::ostringstream d;
  d << "acceptance bounds on 200 random worlds, exact rational arithmetic: " << violations
    << " violations (" << checked_a << " consistent-side, " << checked_r
    << " inconsistent-side checks) in " << secs << "s";
  report_line(1, ok, d.str());
}

// --- criterion 2: Monte Carlo vs exact ---------------------------------------

void criterion_2() {
  using analytical::Rational;
  auto t0 = Clock::now();
  int outliers = 0, compared = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rw = analytical::generate_random_world<Rational>(i * 7'919 + 101);
    auto exact = analytical::exact_accept_prob(rw.bundle.world, rw.bundle.model);
    auto dbl = analytical::to_double_bundle(rw.bundle);
    auto mc = analytical::monte_carlo_accept(dbl.world, dbl.model, 100'000, 4242 + i);
    auto check = [&](const analytical::MonteCarloEstimate& est,
                     const analytical::ProbValue<Rational>& truth) {
      if (est.vacuous || truth.vacuous) return;
      ++compared;
      double diff = std::abs(est.estimate - analytical::to_double(truth.value));
      double tol = 4.0 * est.standard_error + 1e-12;  // exact hits have zero SE
      if (diff > tol) ++outliers;
    };
    check(mc.given_g, exact.given_g);
    check(mc.given_not_g, exact.given_not_g);
  }
  double secs = seconds_since(t0);
  bool ok = outliers == 0 && compared >= 20 && secs < 60.0;
  std::ostringstream d;
  d << "Monte Carlo (n=100000) vs exact on 20 worlds: " << outliers << "/" << compared
    << " estimates beyond 4 standard errors in " << secs << "s";
  report_line(2, ok, d.str());
}

// --- criterion 3: the worked example -----------------------------------------

void criterion_3() {
  using analytical::Rational;
  auto bundle = analytical::load_world_text<Rational>(slurp(kData + "/worlds/w1.json"));
  auto exact = analytical::exact_accept_prob(bundle.world, bundle.model);
  auto params = analytical::measure_params(bundle.world, bundle.model, Rational(4, 5),
                                           Rational(1, 10));
  auto bounds = analytical::theorem_bounds(params);
  bool ok = exact.given_g.value == Rational(17, 20) &&
            exact.given_not_g.value == Rational(1, 10) &&
            bounds.a_lower == Rational(4, 5) && bounds.r_upper == Rational(1, 10);
  std::ostringstream d;
  d << "worked example: exact (" << analytical::to_double(exact.given_g.value) << ", "
    << analytical::to_double(exact.given_not_g.value) << "), bounds ("
    << analytical::to_double(bounds.a_lower) << ", " << analytical::to_double(bounds.r_upper)
    << ") at l=0.8, u=0.1";
  report_line(3, ok, d.str());
}

// --- criterion 4: k-amplification of the sampler edge ------------------------

void criterion_4() {
  auto bundle = analytical::load_world_text<analytical::Rational>(R"({
    "schema_version": 1,
    "domain_a": [{"name": "a1", "class": "a1"}],
    "domain_b": [
      {"name": "b1", "class": "b1"}, {"name": "b2", "class": "b2"},
      {"name": "b3", "class": "b3"}
    ],
    "consistent": [["a1", "b1"]],
    "joint": [{"a": "a1", "b": "b1", "mass": 1}],
    "transfer": [{"a": "a1", "row": {"b1": "1/2", "b2": "3/10", "b3": "1/5"}}]
  })");
  backends::SamplerBackend sampler(analytical::to_double_bundle(bundle));
  backends::MiniLangAdapter adapter((minilang::InputGrid()));
  engine::EngineBackends eb;
  eb.generator = &sampler;
  eb.verifier = &adapter;

  const int n = 2048;
  int hits_k1 = 0, hits_k10 = 0;
  for (int i = 0; i < n; ++i) {
    Instance inst;
    inst.name = "edge" + std::to_string(i);
    inst.docstring = "b1";
    inst.postconditions = {"x == x  // source a1"};
    inst.signature = minilang::parse_signature("method pair(x: int) returns (y: int)");
    inst.code_body = "y := x;";
    inst.io_tests.push_back({{Value(Int{0})}, "0"});

    EngineConfig cfg;
    cfg.m = 1;
    cfg.seed = 31'000 + i;
    cfg.k = 1;
    hits_k1 += engine::run_check_amplified(inst, CheckKind::Anno2Doc, cfg, eb).accepted;
    cfg.k = 10;
    hits_k10 += engine::run_check_amplified(inst, CheckKind::Anno2Doc, cfg, eb).accepted;
  }
  // Measured per-run acceptance, then the amplification prediction from it.
  double p_hat = double(hits_k1) / n;
  double se_p = std::sqrt(p_hat * (1.0 - p_hat) / n);
  double predicted = 1.0 - std::pow(1.0 - p_hat, 10);
  double q_hat = double(hits_k10) / n;
  double se_q = std::sqrt(q_hat * (1.0 - q_hat) / n);
  // Delta method for the prediction's own uncertainty.
  double se_pred = 10.0 * std::pow(1.0 - p_hat, 9) * se_p;
  double sigma = std::sqrt(se_q * se_q + se_pred * se_pred);
  bool ok = std::abs(q_hat - predicted) <= 3.0 * sigma;
  // Also against the exact per-run probability p = M(a1, [b1]) = 1/2.
  double q_exact = analytical::to_double(
      analytical::k_amplified(analytical::Rational(1, 2), 10));
  ok = ok && std::abs(q_hat - q_exact) <= 3.0 * se_q;
  std::ostringstream d;
  d << "sampler edge over " << n << " instances: measured p=" << p_hat << ", k=10 rate "
    << q_hat << " vs 1-(1-p)^10 = " << predicted << " (|diff| " << std::abs(q_hat - predicted)
    << " <= 3 sigma = " << 3.0 * sigma << "); vs exact " << q_exact << " within "
    << 3.0 * se_q;
  report_line(4, ok, d.str());
}

// --- criterion 5: zero false positives on the bundled corpus -----------------

void criterion_5() {
  auto t0 = Clock::now();
  dataset::LoadedDataset ds = dataset::load_dataset(kData + "/mini_corpus");
  backends::ScriptedBackend scripted =
      backends::ScriptedBackend::from_file(kData + "/fixtures/consistent.json");
  backends::MiniLangAdapter adapter((minilang::InputGrid()));
  engine::EngineBackends eb;
  eb.generator = &scripted;
  eb.verifier = &adapter;

  int gt_total = 0, gt_accepted = 0, adv_total = 0, adv_accepted = 0, gate_failures = 0;
  for (int k : {1, 10}) {
    EngineConfig cfg;
    cfg.k = k;
    cfg.seed = 7;
    auto verdicts = engine::run_dataset(ds.instances, cfg, eb, 4);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      const ConsistencyVerdict& v = verdicts[i];
      if (v.variant == VariantLabel::C0_GroundTruth) {
        ++gt_total;
        gt_accepted += v.overall_accept;
      } else {
        ++adv_total;
        adv_accepted += v.overall_accept;
        if (v.variant != VariantLabel::C1 && !v.result(CheckKind::AnnoSound).accepted)
          ++gate_failures;  // C2/C3/C6 must survive the soundness gate
      }
    }
  }
  double secs = seconds_since(t0);
  bool ok = ds.instances.size() >= 30 && gt_total == 14 && gt_accepted == gt_total &&
            adv_accepted == 0 && gate_failures == 0 && secs < 30.0;
  std::ostringstream d;
  d << "bundled corpus (" << ds.instances.size() << " instances) at k=1 and k=10: "
    << gt_accepted << "/" << gt_total << " ground-truth accepted, " << adv_accepted << "/"
    << adv_total << " adversarial accepted, " << gate_failures
    << " soundness-gate failures among C2/C3/C6, in " << secs << "s";
  report_line(5, ok, d.str());
}

// --- criterion 6: template golden --------------------------------------------

void criterion_6() {
  dataset::LoadedDataset ds = dataset::load_dataset(kData + "/mini_corpus");
  const Instance* max_array = nullptr;
  for (const Instance& inst : ds.instances)
    if (inst.name == "max_array") max_array = &inst;
  bool ok = false;
  std::string detail = "max_array instance missing";
  if (max_array) {
    auto tmpl = equivalence::build_anno_equiv_template(
        *max_array, {"1 <= len(a)"},
        {"exists j in 0 .. len(a) :: a[j] == m", "forall j in 0 .. len(a) :: a[j] <= m"},
        max_array->template_skeleton);
    std::string golden = slurp(kData + "/golden/max_array_template.golden");
    ok = !golden.empty() && tmpl.text == golden;
    detail = ok ? "instantiated template is byte-identical to the golden"
                : "instantiated template differs from the golden";
  }
  report_line(6, ok, detail);
}

// --- criterion 7: report strings ----------------------------------------------

void criterion_7() {
  auto synth = [](int accepted, int total, int k) {
    std::vector<report::VerdictRecord> out;
    for (int i = 0; i < total; ++i) {
      ConsistencyVerdict v;
      v.instance_name = "s" + std::to_string(k) + "_" + std::to_string(i);
      v.variant = VariantLabel::C0_GroundTruth;
      for (CheckKind kind : kAllCheckKinds) {
        CheckResult r;
        r.kind = kind;
        r.accepted = i < accepted;
        v.results[static_cast<int>(kind)] = r;
      }
      v.overall_accept = i < accepted;
      out.push_back({v, k, 3, 0});
    }
    return out;
  };
  auto records = synth(45, 60, 1);
  auto k10 = synth(52, 60, 10);
  records.insert(records.end(), k10.begin(), k10.end());
  std::string summary = report::render_summary(records);
  bool ok = summary.find("45/60 (75%)") != std::string::npos &&
            summary.find("52/60 (87%)") != std::string::npos;
  report_line(7, ok,
              ok ? "summary renders 45/60 (75%) and 52/60 (87%)"
                 : "summary is missing the expected cells:\n" + summary);
}

}  // namespace

int main() {
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
  } catch (const std::exception& e) {
    std::cout << "FAIL: unexpected exception: " << e.what() << "\n";
    return 2;
  }
  if (failures) {
    std::cout << failures << " criteria failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
