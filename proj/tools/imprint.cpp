// imprint: command-line front end for the information measures, the factor
// pipeline and the logistic-map simulator.
//
// Exit codes: 0 success, 1 input error, 2 IPF did not converge,
// 3 some pipeline variable set failed.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imprint/anticipatory_dynamics.hpp"
#include "imprint/biblio_ingest.hpp"
#include "imprint/detail/text.hpp"
#include "imprint/errors.hpp"
#include "imprint/factor_model.hpp"
#include "imprint/info_measures.hpp"
#include "imprint/maxent_ipf.hpp"
#include "imprint/pipeline.hpp"
#include "imprint/reports.hpp"

namespace {

using namespace imprint;
using detail::format_fixed;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnconverged = 2;

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    detail::write_file_atomic(path, contents);
  }
}

struct MeasuresArgs {
  std::string table;
  double tolerance = kDefaultIpfTolerance;
  std::size_t max_iterations = kDefaultIpfMaxIterations;
  std::string csv;
};

int cmd_measures(const MeasuresArgs& args) {
  const auto table = read_joint_table(args.table);
  const auto report = full_report(table, args.tolerance, args.max_iterations);
  std::cout << to_json(report) << "\n";
  if (!args.csv.empty()) write_output(args.csv, report::measures_csv(report));
  return report.ipf_converged ? kExitOk : kExitUnconverged;
}

struct IpfArgs {
  std::string table;
  std::string margins;
  double tolerance = kDefaultIpfTolerance;
  std::size_t max_iterations = kDefaultIpfMaxIterations;
  std::string out;
};

int cmd_ipf(const IpfArgs& args) {
  const auto table = read_joint_table(args.table);
  const auto margins = args.margins.empty() ? MarginSet::all_pairs(table) : MarginSet::parse(args.margins);
  const auto fit = ipf_fit(table, margins, args.tolerance, args.max_iterations);
  if (!args.out.empty()) detail::write_file_atomic(args.out, to_json(fit.fitted) + "\n");

  const auto all = table.all_axes();
  nlohmann::json diag = {
      {"margins", margins.to_string()},
      {"iterations", fit.iterations},
      {"max_margin_error", fit.max_margin_error},
      {"converged", fit.converged},
      {"entropy_input", entropy(table, all)},
      {"entropy_fitted", entropy(fit.fitted, all)},
      {"interaction_information", interaction_information(table, fit)},
      {"settings", {{"tolerance", args.tolerance}, {"max_iterations", args.max_iterations}}},
  };
  if (args.out.empty()) diag["fitted"] = nlohmann::json::parse(to_json(fit.fitted));
  std::cout << diag.dump(2) << "\n";
  return fit.converged ? kExitOk : kExitUnconverged;
}

struct FactorArgs {
  std::string matrix;
  std::size_t factors = 3;
  bool no_rotate = false;
  std::size_t max_sweeps = factor::kVarimaxMaxSweeps;
  double varimax_tolerance = factor::kVarimaxTolerance;
  std::string out;
  std::string table;
  std::size_t bins = 10;
};

int cmd_factor(const FactorArgs& args) {
  std::vector<std::string> dropped;
  const auto data = factor::drop_constant_columns(factor::data_matrix_from_csv(detail::read_file(args.matrix)), &dropped);
  for (const auto& d : dropped) std::cerr << "dropped constant column '" << d << "'\n";
  const auto corr = factor::correlation_matrix(data);
  auto loadings = factor::extract_factors(corr, args.factors, data.variable_labels);
  if (!args.no_rotate && loadings.k() >= 2) {
    loadings = factor::varimax_rotate(loadings, args.max_sweeps, args.varimax_tolerance).rotated;
  }
  write_output(args.out, factor::to_csv(loadings));
  if (!args.table.empty()) detail::write_file_atomic(args.table, to_json(factor::bin_loadings(loadings, args.bins)) + "\n");
  return kExitOk;
}

struct IngestArgs {
  std::vector<std::string> records;
  std::vector<std::string> kinds;
  std::string config;
  std::optional<std::size_t> min_occurrence;
  std::string stopwords;
  std::string reference_mode;
  std::string out;
};

int cmd_ingest(const IngestArgs& args) {
  auto cfg = args.config.empty() ? pipeline::PipelineConfig{} : pipeline::load_config(args.config);
  const auto docs = pipeline::read_corpus(args.records);
  std::vector<factor::DataMatrix> parts;
  for (const auto& k : args.kinds) {
    auto spec = cfg.spec_for(biblio::parse_feature_kind(k));
    if (args.min_occurrence) spec.min_occurrence = *args.min_occurrence;
    if (!args.stopwords.empty()) {
      spec.stopwords = args.stopwords == "none"      ? std::set<std::string>{}
                       : args.stopwords == "default" ? biblio::default_stopwords()
                                                     : biblio::load_stopwords(args.stopwords);
    }
    if (args.reference_mode == "source_title") spec.reference_mode = biblio::ReferenceMode::source_title;
    if (args.reference_mode == "full") spec.reference_mode = biblio::ReferenceMode::full;
    parts.push_back(biblio::extract_features(docs, spec));
  }
  const auto matrix = parts.size() == 1 ? parts.front() : biblio::juxtapose(parts);
  write_output(args.out, factor::to_csv(matrix));
  std::cerr << matrix.case_labels.size() << " documents x " << matrix.variable_labels.size() << " variables\n";
  return kExitOk;
}

struct PipelineArgs {
  std::string config;
  std::vector<std::string> inputs;
  std::optional<std::string> output_dir;
  std::optional<std::size_t> factors;
  std::optional<std::size_t> bins;
  std::optional<double> ipf_tolerance;
  std::optional<std::size_t> ipf_max_iterations;
  std::optional<std::size_t> varimax_max_sweeps;
  std::optional<double> varimax_tolerance;
  std::optional<bool> chart;
  std::optional<std::size_t> threads;
};

int cmd_pipeline(const PipelineArgs& args) {
  auto cfg = args.config.empty() ? pipeline::PipelineConfig{} : pipeline::load_config(args.config);
  if (!args.inputs.empty()) cfg.inputs = args.inputs;
  if (args.output_dir) cfg.output_dir = *args.output_dir;
  if (args.factors) cfg.factors = *args.factors;
  if (args.bins) cfg.bins = *args.bins;
  if (args.ipf_tolerance) cfg.ipf_tolerance = *args.ipf_tolerance;
  if (args.ipf_max_iterations) cfg.ipf_max_iterations = *args.ipf_max_iterations;
  if (args.varimax_max_sweeps) cfg.varimax_max_sweeps = *args.varimax_max_sweeps;
  if (args.varimax_tolerance) cfg.varimax_tolerance = *args.varimax_tolerance;
  if (args.chart) cfg.chart = *args.chart;
  if (args.threads) cfg.threads = *args.threads;

  const auto result = pipeline::run_pipeline(cfg);
  for (const auto& s : result.sets) {
    const char* status = s.status == pipeline::SetStatus::ok ? "ok" : s.status == pipeline::SetStatus::skipped ? "skipped" : "failed";
    std::cerr << "[" << s.name << "] " << status;
    if (s.report) {
      std::cerr << " I=" << format_fixed(s.report->i) << " -mu*=" << format_fixed(-s.report->mu_star)
                << " R=" << format_fixed(s.report->r);
    }
    std::cerr << "\n";
    for (const auto& d : s.diagnostics) std::cerr << "  " << d << "\n";
  }
  for (const auto& f : result.written_files) std::cout << f << "\n";
  return result.exit_code;
}

struct DynamicsArgs {
  std::string variant = "incursive";
  double a = 4.0;
  double x0 = 0.5;
  std::size_t steps = 100;
  std::uint64_t seed = 0;
  std::string decisions;
  std::string sweep;
  std::string out;
};

std::vector<bool> parse_bits(const std::string& text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(c == '1');
    } else if (c != ',' && c != ' ') {
      throw DomainError("decisions must be a string of 0/1 characters");
    }
  }
  return bits;
}

std::string summary_line(const dynamics::Trajectory& tr, const dynamics::Params& p) {
  return "variant=" + std::string(dynamics::to_string(tr.variant)) + " a=" + format_fixed(p.a) +
         " x0=" + format_fixed(p.x0) + " steps=" + std::to_string(tr.values.size() - 1) +
         " final=" + format_fixed(tr.values.back()) + " truncated=" + (tr.truncated ? "true" : "false") +
         (tr.out_of_range ? " out_of_range=true" : "") + (tr.truncated ? " (" + tr.truncation_reason + ")" : "");
}

int cmd_dynamics(const DynamicsArgs& args) {
  const auto variant = dynamics::parse_variant(args.variant);
  dynamics::DecisionSource source = args.seed;
  if (!args.decisions.empty()) source = parse_bits(args.decisions);

  std::vector<double> points{args.a};
  if (!args.sweep.empty()) {
    double lo = 0, hi = 0;
    std::size_t n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(args.sweep);
    if (!(ss >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1) {
      throw DomainError("sweep must look like lo:hi:count");
    }
    points.clear();
    for (std::size_t i = 0; i < n; ++i) points.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }

  std::string csv;
  std::vector<std::string> summaries;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const dynamics::Params params{points[i], args.x0, args.steps};
    const auto tr = dynamics::simulate(params, variant, source);
    csv += dynamics::to_csv(tr, !args.sweep.empty(), i == 0);
    summaries.push_back(summary_line(tr, params));
  }
  std::ostream& summary_out = args.out.empty() ? std::cerr : std::cout;
  write_output(args.out, csv);
  for (const auto& s : summaries) summary_out << s << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information measures, maximum-entropy fitting and factor pipelines"};
  app.require_subcommand(1);

  MeasuresArgs measures;
  auto* m = app.add_subcommand("measures", "Entropies, mu*, Q, I and R of a three-axis joint table");
  m->add_option("table", measures.table, "joint table (JSON or CSV)")->required();
  m->add_option("--tolerance", measures.tolerance, "IPF convergence tolerance");
  m->add_option("--max_iterations", measures.max_iterations, "IPF iteration budget");
  m->add_option("--csv", measures.csv, "also write the measures as CSV to this path");

  IpfArgs ipf;
  auto* i = app.add_subcommand("ipf", "Fit the maximum-entropy table for a set of margins");
  i->add_option("table", ipf.table, "joint table (JSON or CSV)")->required();
  i->add_option("--margins", ipf.margins, "constraints such as 'A,B;A,C;B,C' (default: all pairs)");
  i->add_option("--tolerance", ipf.tolerance, "convergence tolerance");
  i->add_option("--max_iterations", ipf.max_iterations, "iteration budget");
  i->add_option("--out", ipf.out, "write the fitted table (JSON) here");

  FactorArgs fac;
  auto* f = app.add_subcommand("factor", "Data matrix CSV -> varimax-rotated loadings CSV");
  f->add_option("matrix", fac.matrix, "data matrix CSV")->required();
  f->add_option("--factors", fac.factors, "number of factors");
  f->add_flag("--no_rotate", fac.no_rotate, "skip the varimax rotation");
  f->add_option("--varimax_max_sweeps", fac.max_sweeps);
  f->add_option("--varimax_tolerance", fac.varimax_tolerance);
  f->add_option("--out", fac.out, "loadings CSV (default stdout)");
  f->add_option("--table", fac.table, "also write the binned joint table (JSON); needs 3 factors");
  f->add_option("--bins", fac.bins, "bins per factor for --table");

  IngestArgs ing;
  auto* g = app.add_subcommand("ingest", "Tagged records -> document x feature incidence CSV");
  g->add_option("records", ing.records, "ISI tagged plain-text files")->required();
  g->add_option("--kind", ing.kinds, "title_word, author or reference (repeat to juxtapose)")->required();
  g->add_option("--config", ing.config, "JSON config with per-kind feature settings");
  g->add_option("--min_occurrence", ing.min_occurrence, "document-frequency threshold");
  g->add_option("--stopwords", ing.stopwords, "stopword file, 'default' or 'none'");
  g->add_option("--reference_mode", ing.reference_mode, "full or source_title")
      ->check(CLI::IsMember({"full", "source_title"}));
  g->add_option("--out", ing.out, "matrix CSV (default stdout)");

  PipelineArgs pip;
  auto* p = app.add_subcommand("pipeline", "Records -> factors -> binned tables -> measure reports");
  p->add_option("--config", pip.config, "JSON pipeline config");
  p->add_option("--inputs", pip.inputs, "record files (override the config)");
  p->add_option("--output_dir", pip.output_dir);
  p->add_option("--factors", pip.factors);
  p->add_option("--bins", pip.bins);
  p->add_option("--ipf_tolerance", pip.ipf_tolerance);
  p->add_option("--ipf_max_iterations", pip.ipf_max_iterations);
  p->add_option("--varimax_max_sweeps", pip.varimax_max_sweeps);
  p->add_option("--varimax_tolerance", pip.varimax_tolerance);
  p->add_option("--chart", pip.chart, "emit chart.svg (true/false)");
  p->add_option("--threads", pip.threads, "variable sets processed concurrently");

  DynamicsArgs dyn;
  auto* d = app.add_subcommand("dynamics", "Simulate the recursive, incursive or hyper-incursive logistic map");
  d->add_option("--variant", dyn.variant, "recursive, incursive or hyper_incursive")
      ->check(CLI::IsMember({"recursive", "incursive", "hyper_incursive", "hyper-incursive"}));
  d->add_option("--a", dyn.a, "growth parameter");
  d->add_option("--x0", dyn.x0, "initial state in [0, 1]");
  d->add_option("--steps", dyn.steps, "number of steps");
  d->add_option("--seed", dyn.seed, "seed for hyper-incursive root choices");
  d->add_option("--decisions", dyn.decisions, "explicit root choices, e.g. 0110 (1 = + root)");
  d->add_option("--sweep", dyn.sweep, "lo:hi:count sweep over a (long-format CSV)");
  d->add_option("--out", dyn.out, "trajectory CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*m) return cmd_measures(measures);
    if (*i) return cmd_ipf(ipf);
    if (*f) return cmd_factor(fac);
    if (*g) return cmd_ingest(ing);
    if (*p) return cmd_pipeline(pip);
    if (*d) return cmd_dynamics(dyn);
  } catch (const imprint::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
