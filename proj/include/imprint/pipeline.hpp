#pragma once

// records -> incidence matrices -> 3-factor model -> binned joint table ->
// measure report, once per configured variable set.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "imprint/biblio_ingest.hpp"
#include "imprint/maxent_ipf.hpp"

namespace imprint::pipeline {

struct VariableSet {
  std::string name;
  std::vector<biblio::FeatureKind> kinds;  // juxtaposed in this order
};

struct PipelineConfig {
  std::vector<std::string> inputs;
  biblio::FeatureSpec title_word{biblio::FeatureKind::title_word, 3, biblio::default_stopwords(), biblio::ReferenceMode::full};
  biblio::FeatureSpec author{biblio::FeatureKind::author, 2, {}, biblio::ReferenceMode::full};
  biblio::FeatureSpec reference{biblio::FeatureKind::reference, 2, {}, biblio::ReferenceMode::full};
  std::vector<VariableSet> variable_sets = default_variable_sets();
  std::size_t factors = 3;
  std::size_t bins = 10;
  double ipf_tolerance = kDefaultIpfTolerance;
  std::size_t ipf_max_iterations = kDefaultIpfMaxIterations;
  std::size_t varimax_max_sweeps = 100;
  double varimax_tolerance = 1e-12;
  std::string output_dir = "out";
  bool chart = true;
  std::size_t threads = 1;

  // words; authors; references; words+authors; words+authors+references
  static std::vector<VariableSet> default_variable_sets();

  const biblio::FeatureSpec& spec_for(biblio::FeatureKind kind) const;
  void validate() const;  // throws DomainError
};

// Reads a JSON config. Relative input and stopword paths are resolved
// against the config file's directory.
PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json(const std::string& text, const std::string& base_dir = "");

enum class SetStatus { ok, skipped, failed };

struct SetOutcome {
  std::string name;
  SetStatus status = SetStatus::failed;
  std::optional<MeasureReport> report;
  std::string report_json;  // empty unless status == ok
  std::vector<std::string> diagnostics;
};

struct PipelineResult {
  std::vector<SetOutcome> sets;
  std::vector<std::string> written_files;
  // 0 success, 2 some IPF run did not converge, 3 some set failed or was skipped.
  int exit_code = 0;
};

// Runs every variable set for already-parsed documents without touching the
// filesystem.
std::vector<SetOutcome> run_sets(const std::vector<biblio::DocRecord>& docs, const PipelineConfig& config);

// Full run: parses config.inputs, runs every set, and writes <set>.json,
// summary.csv and (if enabled) chart.svg into config.output_dir.
PipelineResult run_pipeline(const PipelineConfig& config);

// Parses and concatenates several record files; ordinal ids are renumbered
// across files so they stay unique.
std::vector<biblio::DocRecord> read_corpus(const std::vector<std::string>& paths);

std::string file_stem_for(const std::string& set_name);

}  // namespace imprint::pipeline
