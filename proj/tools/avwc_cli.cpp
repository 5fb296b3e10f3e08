// Batch front-end for the library: loads channel-spec JSON files, runs
// capacity evaluations, structural checks, code simulations, secrecy
// audits, and the permutation robustifier, and emits CSV/JSON artifacts.
//
// All stochastic outputs are fully determined by --seed; numeric text uses
// '.' decimals and 12 significant digits regardless of locale.  Exit codes:
// 0 success, 1 invalid usage or inconsistent inputs, 2 malformed spec file,
// 3 enumeration budget exceeded.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "avwc/budget.hpp"
#include "avwc/capacity.hpp"
#include "avwc/channel.hpp"
#include "avwc/code.hpp"
#include "avwc/io.hpp"
#include "avwc/prob.hpp"
#include "avwc/robustify.hpp"
#include "avwc/sequence.hpp"

namespace {

using avwc::format_double;

// Shared wiretap-code options.  J or L left at 0 means "derive from the
// mutual-information size formula".
struct CodeFlags {
  int n = 4;
  double tau = 0.2;
  double delta = 0.15;
  double alpha = 0.1;
  long long J = 0;
  long long L = 0;
  std::uint64_t seed = 1;
  double budget = -1.0;
};

void add_code_flags(CLI::App* cmd, CodeFlags& f) {
  cmd->add_option("--n", f.n, "blocklength")->check(CLI::Range(1, 24));
  cmd->add_option("--tau", f.tau, "rate slack in the code-size formula");
  cmd->add_option("--delta", f.delta, "typicality width");
  cmd->add_option("--alpha", f.alpha,
                  "secrecy exponent (epsilon_n = 2^(-n*alpha))");
  cmd->add_option("--J", f.J, "message count (0: derive)");
  cmd->add_option("--L", f.L, "randomization indices per message (0: derive)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--budget", f.budget,
                  "enumeration budget override (<0: AVWC_BUDGET or default)");
}

avwc::WiretapCode build_code(const avwc::CavwcSpec& spec, const CodeFlags& f) {
  avwc::CodeParams params;
  params.n = f.n;
  params.tau = f.tau;
  params.delta = f.delta;
  params.alpha = f.alpha;
  params.input_dist = avwc::Distribution::uniform(spec.a_size());
  if (f.J > 0 && f.L > 0) {
    params.J = f.J;
    params.L = f.L;
  } else {
    const avwc::CodeSizes sizes =
        avwc::derive_code_sizes(spec, params.input_dist, f.tau, f.n);
    params.J = f.J > 0 ? f.J : sizes.J;
    params.L = f.L > 0 ? f.L : sizes.L;
    std::cout << "derived sizes: J=" << sizes.J << " L=" << sizes.L
              << " (min legit " << format_double(sizes.min_legit_bits)
              << " bits, max eaves " << format_double(sizes.max_eaves_bits)
              << " bits)\n";
  }
  return avwc::make_wiretap_code(spec, params, f.seed);
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw avwc::ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw avwc::ParseError(path + ": write failed");
}

std::string word_text(const avwc::Word& w, int base) {
  return w.empty() ? std::string("-") : avwc::word_to_string(w, base);
}

void print_estimate(const avwc::CapacityEstimate& est) {
  std::cout << "value: " << format_double(est.value) << " bits/letter (k="
            << est.k << ")\n";
  std::cout << "raw objective: " << format_double(est.diag.raw_bits)
            << " bits/letter, restarts " << est.diag.restarts
            << ", ascent steps " << est.diag.ascent_steps
            << (est.diag.heuristic_min ? ", heuristic inner min" : "") << "\n";
  if (est.worst_q) {
    std::cout << "worst legit mixture:";
    for (int s = 0; s < est.worst_q->size(); ++s)
      std::cout << ' ' << format_double((*est.worst_q)[s], 6);
    std::cout << "\n";
  }
  if (est.diag.worst_r >= 0)
    std::cout << "worst compound index: " << est.diag.worst_r << "\n";
  if (!est.worst_s_k.empty())
    std::cout << "worst eavesdropper state word: "
              << word_text(est.worst_s_k, 36) << "\n";
}

void emit_estimate_artifacts(const avwc::CapacityEstimate& est,
                             const std::string& json_path,
                             const std::string& csv_path) {
  if (!json_path.empty())
    avwc::write_json_file(json_path, avwc::capacity_to_json(est));
  if (!csv_path.empty())
    write_text(csv_path,
               avwc::capacity_csv_header() + "\n" +
                   avwc::capacity_csv_row(est) + "\n");
}

std::vector<double> parse_radii(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || !(v >= 0.0))
      throw std::invalid_argument("--radii: bad entry \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--radii: empty list");
  return out;
}

// Deterministically seeded eavesdropper state words for audits on large
// state spaces.
std::vector<avwc::Word> sampled_state_words(int s_size, int n, int count,
                                            std::uint64_t seed) {
  std::vector<avwc::Word> words;
  avwc::Rng rng(avwc::derive_seed(seed, 0x5157));
  for (int i = 0; i < count; ++i) {
    avwc::Word w(static_cast<std::size_t>(n), 0);
    for (auto& v : w) v = rng.index(s_size);
    words.push_back(std::move(w));
  }
  return words;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Arbitrarily varying wiretap channels: secrecy-rate evaluation, "
      "structural checks, finite-blocklength code simulation, and "
      "permutation robustification"};
  app.require_subcommand(1);

  // --- capacity ---------------------------------------------------------
  std::string cap_spec, cap_json, cap_csv;
  int cap_k = 1, cap_restarts = 16, cap_ucap = 0;
  std::uint64_t cap_seed = 1;
  double cap_budget = -1.0;
  auto* cap = app.add_subcommand(
      "capacity", "multi-letter secrecy-rate lower-bound objective");
  cap->add_option("spec", cap_spec, "channel-spec JSON")->required();
  cap->add_option("--k", cap_k, "block letters")->check(CLI::Range(1, 8));
  cap->add_option("--restarts", cap_restarts, "optimizer restarts");
  cap->add_option("--u-cap", cap_ucap, "auxiliary alphabet cap (0: |A|^k)");
  cap->add_option("--seed", cap_seed, "random seed");
  cap->add_option("--budget", cap_budget, "enumeration budget override");
  cap->add_option("--json", cap_json, "write the estimate as JSON");
  cap->add_option("--csv", cap_csv, "write the estimate as a CSV row");
  cap->callback([&] {
    const avwc::AvwcSpec spec = avwc::load_avwc(cap_spec);
    avwc::EvalOptions opts;
    opts.restarts = cap_restarts;
    opts.seed = cap_seed;
    opts.u_cap = cap_ucap;
    opts.budget = cap_budget;
    const avwc::CapacityEstimate est = avwc::evaluate_RSk(spec, cap_k, opts);
    print_estimate(est);
    emit_estimate_artifacts(est, cap_json, cap_csv);
  });

  // --- dagger -----------------------------------------------------------
  std::string dag_spec, dag_json, dag_csv;
  int dag_restarts = 16;
  std::uint64_t dag_seed = 1;
  double dag_budget = -1.0;
  auto* dag = app.add_subcommand(
      "dagger", "compound-legit secrecy rate (single-letter, U = X)");
  dag->add_option("spec", dag_spec, "channel-spec JSON (either schema)")
      ->required();
  dag->add_option("--restarts", dag_restarts, "optimizer restarts");
  dag->add_option("--seed", dag_seed, "random seed");
  dag->add_option("--budget", dag_budget, "enumeration budget override");
  dag->add_option("--json", dag_json, "write the estimate as JSON");
  dag->add_option("--csv", dag_csv, "write the estimate as a CSV row");
  dag->callback([&] {
    const avwc::CavwcSpec spec = avwc::load_cavwc(dag_spec);
    avwc::EvalOptions opts;
    opts.restarts = dag_restarts;
    opts.seed = dag_seed;
    opts.budget = dag_budget;
    const avwc::CapacityEstimate est = avwc::evaluate_RS_dagger(spec, opts);
    print_estimate(est);
    emit_estimate_artifacts(est, dag_json, dag_csv);
  });

  // --- degraded ---------------------------------------------------------
  std::string deg_spec;
  int deg_s1 = 0, deg_s2 = 0, deg_grid = 64;
  std::uint64_t deg_seed = 1;
  auto* deg = app.add_subcommand(
      "degraded",
      "per-state eavesdropper degradedness; with --s1/--s2, the "
      "product-structure + mixture-degradedness check");
  deg->add_option("spec", deg_spec, "channel-spec JSON")->required();
  deg->add_option("--s1", deg_s1, "legit state-factor size");
  deg->add_option("--s2", deg_s2, "eavesdropper state-factor size");
  deg->add_option("--grid", deg_grid, "random mixture grid points");
  deg->add_option("--seed", deg_seed, "grid seed");
  deg->callback([&] {
    const avwc::AvwcSpec spec = avwc::load_avwc(deg_spec);
    if (deg_s1 > 0 || deg_s2 > 0) {
      const auto grid = avwc::default_q_grid(deg_s1, deg_grid, deg_seed);
      const avwc::StrongDegradednessReport rep =
          avwc::strongly_degraded_check(spec, deg_s1, deg_s2, grid);
      std::cout << "product structure: "
                << (rep.product_structure_ok ? "ok" : "violated") << "\n";
      std::cout << "grid degradedness: "
                << (rep.degraded_ok ? "ok" : "violated")
                << " (max residual " << format_double(rep.max_residual)
                << ")\n";
      if (!rep.failure.empty()) std::cout << "detail: " << rep.failure << "\n";
      std::cout << (rep.holds() ? "strongly degraded on the grid\n"
                                : "not strongly degraded\n");
    } else {
      for (int s = 0; s < spec.s_size(); ++s) {
        const avwc::DegradednessCertificate cert = avwc::degraded_check(
            spec.legit[static_cast<std::size_t>(s)],
            spec.eaves[static_cast<std::size_t>(s)]);
        std::cout << "state " << s << ": "
                  << (cert.feasible ? "degraded" : "not degraded")
                  << " (residual " << format_double(cert.residual) << ")\n";
      }
    }
  });

  // --- best-eaves -------------------------------------------------------
  std::string be_spec;
  auto* be = app.add_subcommand(
      "best-eaves", "state from which every eavesdropper channel is degraded");
  be->add_option("spec", be_spec, "channel-spec JSON")->required();
  be->callback([&] {
    const avwc::AvwcSpec spec = avwc::load_avwc(be_spec);
    const std::optional<int> idx = avwc::best_eavesdropper_check(spec);
    if (idx)
      std::cout << "best eavesdropper state: " << *idx << "\n";
    else
      std::cout << "best eavesdropper state: none\n";
  });

  // --- hausdorff --------------------------------------------------------
  std::string hd_a, hd_b;
  auto* hd = app.add_subcommand(
      "hausdorff", "family distance between two channel specs");
  hd->add_option("a", hd_a, "first channel-spec JSON")->required();
  hd->add_option("b", hd_b, "second channel-spec JSON")->required();
  hd->callback([&] {
    const double d = avwc::hausdorff_distance(avwc::load_avwc(hd_a),
                                              avwc::load_avwc(hd_b));
    std::cout << "hausdorff distance: " << format_double(d) << "\n";
  });

  // --- continuity -------------------------------------------------------
  std::string cont_spec, cont_radii = "0.1,0.01,0.001", cont_csv;
  int cont_k = 1, cont_trials = 3, cont_restarts = 8;
  std::uint64_t cont_seed = 1;
  auto* cont = app.add_subcommand(
      "continuity", "rate shift under random bounded perturbations");
  cont->add_option("spec", cont_spec, "channel-spec JSON")->required();
  cont->add_option("--k", cont_k, "block letters")->check(CLI::Range(1, 4));
  cont->add_option("--radii", cont_radii, "comma-separated perturbation radii");
  cont->add_option("--trials", cont_trials, "perturbations per radius");
  cont->add_option("--restarts", cont_restarts, "optimizer restarts");
  cont->add_option("--seed", cont_seed, "random seed");
  cont->add_option("--csv", cont_csv, "write per-trial rows as CSV");
  cont->callback([&] {
    const avwc::AvwcSpec spec = avwc::load_avwc(cont_spec);
    avwc::EvalOptions opts;
    opts.restarts = cont_restarts;
    opts.seed = cont_seed;
    const std::vector<double> radii = parse_radii(cont_radii);
    const avwc::ContinuityReport rep =
        avwc::continuity_probe(spec, radii, cont_k, cont_trials, opts);
    std::cout << "base value: " << format_double(rep.base_value)
              << " bits/letter\n";
    for (double r : radii)
      std::cout << "radius " << format_double(r, 6) << ": max |shift| "
                << format_double(rep.max_delta_for(r)) << "\n";
    if (!cont_csv.empty()) {
      std::string csv = "radius,achieved_distance,delta_bits\n";
      for (const auto& row : rep.rows) {
        csv += format_double(row.radius);
        csv += ',';
        csv += format_double(row.achieved_d);
        csv += ',';
        csv += format_double(row.delta_value);
        csv += '\n';
      }
      write_text(cont_csv, csv);
    }
  });

  // --- simulate ---------------------------------------------------------
  std::string sim_spec, sim_mode = "exact", sim_code, sim_csv;
  CodeFlags sim_flags;
  long long sim_trials = 100000;
  auto* sim = app.add_subcommand(
      "simulate", "sample a random wiretap code and measure decoding error");
  sim->add_option("spec", sim_spec, "channel-spec JSON (either schema)")
      ->required();
  add_code_flags(sim, sim_flags);
  sim->add_option("--mode", sim_mode, "exact | mc")
      ->check(CLI::IsMember({"exact", "mc"}));
  sim->add_option("--trials", sim_trials, "Monte-Carlo samples per channel");
  sim->add_option("--code", sim_code, "write the codebook as CSV");
  sim->add_option("--csv", sim_csv, "write the error report as CSV");
  sim->callback([&] {
    const avwc::CavwcSpec spec = avwc::load_cavwc(sim_spec);
    const avwc::WiretapCode code = build_code(spec, sim_flags);
    avwc::ErrorOptions eopts;
    eopts.monte_carlo = (sim_mode == "mc");
    eopts.samples = sim_trials;
    eopts.seed = avwc::derive_seed(sim_flags.seed, 0xE5);
    eopts.budget = sim_flags.budget;
    const avwc::ErrorReport rep = avwc::average_error(code, spec, eopts);
    std::cout << "code: n=" << code.n() << " J=" << code.J() << " L="
              << code.L() << " seed=" << sim_flags.seed << "\n";
    std::cout << "message error (" << sim_mode
              << "): " << format_double(rep.message_error)
              << ", pair error: " << format_double(rep.pair_error)
              << ", worst compound index: " << rep.worst_r << "\n";
    if (!sim_code.empty())
      avwc::write_codebook_csv(sim_code, code.codebook, spec.a_size());
    if (!sim_csv.empty()) {
      std::string csv =
          "n,tau,delta,alpha,J,L,seed,mode,message_error,pair_error,worst_r\n";
      csv += std::to_string(code.n());
      csv += ',';
      csv += format_double(sim_flags.tau);
      csv += ',';
      csv += format_double(sim_flags.delta);
      csv += ',';
      csv += format_double(sim_flags.alpha);
      csv += ',';
      csv += std::to_string(code.J());
      csv += ',';
      csv += std::to_string(code.L());
      csv += ',';
      csv += std::to_string(sim_flags.seed);
      csv += ',';
      csv += sim_mode;
      csv += ',';
      csv += format_double(rep.message_error);
      csv += ',';
      csv += format_double(rep.pair_error);
      csv += ',';
      csv += std::to_string(rep.worst_r);
      csv += '\n';
      write_text(sim_csv, csv);
    }
  });

  // --- audit ------------------------------------------------------------
  std::string aud_spec, aud_csv;
  CodeFlags aud_flags;
  int aud_states = 0;
  auto* aud = app.add_subcommand(
      "audit",
      "reference-measure secrecy audit over eavesdropper state words");
  aud->add_option("spec", aud_spec, "channel-spec JSON (either schema)")
      ->required();
  add_code_flags(aud, aud_flags);
  aud->add_option("--states", aud_states,
                  "random state words to audit (0: exhaustive)");
  aud->add_option("--csv", aud_csv, "write per-state rows as CSV");
  aud->callback([&] {
    const avwc::CavwcSpec spec = avwc::load_cavwc(aud_spec);
    const avwc::WiretapCode code = build_code(spec, aud_flags);
    std::vector<avwc::Word> states;
    if (aud_states > 0)
      states = sampled_state_words(spec.s_size(), code.n(), aud_states,
                                   aud_flags.seed);
    avwc::AuditOptions aopts;
    aopts.seed = avwc::derive_seed(aud_flags.seed, 0xA0D1);
    aopts.budget = aud_flags.budget;
    const avwc::SecrecyAudit audit = avwc::secrecy_audit(code, states, aopts);
    avwc::ErrorOptions eopts;
    eopts.budget = aud_flags.budget;
    const avwc::ErrorReport err = avwc::average_error(code, spec, eopts);
    std::cout << "code: n=" << code.n() << " J=" << code.J() << " L="
              << code.L() << " seed=" << aud_flags.seed << "\n";
    std::cout << "audited state words: " << audit.slices.size() << "\n";
    std::cout << "max leakage: " << format_double(audit.max_leakage)
              << " bits at s^n=" << word_text(audit.worst_s_n, spec.s_size())
              << "\n";
    std::cout << "max message-law TV from reference: "
              << format_double(audit.max_tv) << "\n";
    std::cout << "message error: " << format_double(err.message_error) << "\n";
    long long mass_flags = 0, tv_flags = 0;
    for (const auto& slice : audit.slices) {
      mass_flags += slice.mass_bound_flag ? 1 : 0;
      tv_flags += slice.tv_bound_flag ? 1 : 0;
    }
    std::cout << "mass-bound flags: " << mass_flags
              << ", tv-bound flags: " << tv_flags << "\n";
    if (!aud_csv.empty()) {
      std::string csv = avwc::audit_csv_header() + "\n";
      for (const auto& slice : audit.slices) {
        csv += avwc::audit_csv_row(slice.s_n, spec.s_size(),
                                   slice.leakage_bits, slice.max_tv,
                                   err.message_error);
        csv += '\n';
      }
      write_text(aud_csv, csv);
    }
  });

  // --- robustify --------------------------------------------------------
  std::string rob_spec, rob_manifest, rob_code;
  CodeFlags rob_flags;
  int rob_m = 16;
  bool rob_full = false, rob_eval = false;
  auto* rob = app.add_subcommand(
      "robustify",
      "average a compound code over random coordinate permutations");
  rob->add_option("spec", rob_spec, "channel-spec JSON (per-letter schema)")
      ->required();
  add_code_flags(rob, rob_flags);
  rob->add_option("--m", rob_m, "sampled permutations");
  rob->add_flag("--full", rob_full, "use the full symmetric group (n <= 6)");
  rob->add_flag("--eval", rob_eval,
                "also evaluate the correlated code's worst-state error");
  rob->add_option("--manifest", rob_manifest,
                  "write the correlated-code manifest JSON");
  rob->add_option("--code", rob_code, "write the base codebook as CSV");
  rob->callback([&] {
    const avwc::AvwcSpec avwc_spec = avwc::load_avwc(rob_spec);
    const avwc::CavwcSpec spec = avwc::cavwc_from_avwc(avwc_spec);
    const avwc::WiretapCode code = build_code(spec, rob_flags);
    const avwc::CorrelatedCode cc = avwc::robustify(
        code, rob_m, avwc::derive_seed(rob_flags.seed, 0x90B), rob_full);
    std::cout << "correlated code: " << cc.permutations.size()
              << " permutations, uniform weights, n=" << code.n() << " J="
              << code.J() << " L=" << code.L() << "\n";
    if (rob_eval) {
      avwc::ErrorOptions eopts;
      eopts.budget = rob_flags.budget;
      const avwc::CorrelatedErrorReport rep =
          avwc::correlated_error(cc, avwc_spec, {}, eopts);
      std::cout << "worst-state message error: "
                << format_double(rep.message_error) << " at s^n="
                << word_text(rep.worst_s_n, avwc_spec.s_size()) << "\n";
    }
    if (!rob_code.empty())
      avwc::write_codebook_csv(rob_code, code.codebook, spec.a_size());
    if (!rob_manifest.empty())
      avwc::write_correlated_manifest(rob_manifest,
                                      rob_code.empty() ? "-" : rob_code, cc);
  });

  // --- rt-check ---------------------------------------------------------
  std::string rt_spec;
  CodeFlags rt_flags;
  double rt_eps = -1.0;
  auto* rt = app.add_subcommand(
      "rt-check",
      "type-wise hypothesis and permutation-average conclusion for the "
      "success function of a sampled code");
  rt->add_option("spec", rt_spec, "channel-spec JSON (per-letter schema)")
      ->required();
  add_code_flags(rt, rt_flags);
  rt->add_option("--eps", rt_eps,
                 "hypothesis epsilon (<0: smallest epsilon that holds)");
  rt->callback([&] {
    const avwc::AvwcSpec avwc_spec = avwc::load_avwc(rt_spec);
    const avwc::CavwcSpec spec = avwc::cavwc_from_avwc(avwc_spec);
    const avwc::WiretapCode code = build_code(spec, rt_flags);
    const int n = code.n();
    const int s_size = avwc_spec.s_size();
    const std::uint64_t sn = avwc::pow_checked(
        static_cast<std::uint64_t>(s_size), static_cast<unsigned>(n));
    avwc::check_budget(static_cast<double>(sn) * 64.0,
                       rt_flags.budget < 0 ? avwc::default_budget()
                                           : rt_flags.budget,
                       "rt-check (state enumeration)");
    std::vector<double> f;
    f.reserve(sn);
    avwc::ErrorOptions eopts;
    eopts.budget = rt_flags.budget;
    avwc::Word s(static_cast<std::size_t>(n), 0);
    do {
      const avwc::ErrorReport rep =
          avwc::average_error(code, avwc_spec, {s}, eopts);
      f.push_back(1.0 - rep.message_error);
    } while (avwc::next_word(s, s_size));
    double eps = rt_eps;
    if (eps < 0.0) {
      // Smallest epsilon for which every type satisfies the hypothesis.
      eps = 0.0;
      const avwc::RtReport probe = avwc::rt_check(f, n, s_size, 0.0);
      if (!probe.hypothesis_holds) eps = -probe.hypothesis_margin;
    }
    const avwc::RtReport rep = avwc::rt_check(f, n, s_size, eps);
    std::cout << "epsilon: " << format_double(rep.eps) << " over "
              << rep.types_checked << " types\n";
    std::cout << "hypothesis: " << (rep.hypothesis_holds ? "holds" : "fails")
              << " (margin " << format_double(rep.hypothesis_margin) << ")\n";
    std::cout << "conclusion bound: " << format_double(rep.bound) << ", "
              << (rep.conclusion_holds ? "holds" : "fails") << " (margin "
              << format_double(rep.conclusion_margin) << ")\n";
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const avwc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const avwc::BudgetError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
