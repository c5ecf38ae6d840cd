#include "imprint/pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <map>
#include <set>
#include <thread>
#include <variant>

#include <json.hpp>

#include "imprint/detail/text.hpp"
#include "imprint/errors.hpp"
#include "imprint/factor_model.hpp"
#include "imprint/reports.hpp"

namespace imprint::pipeline {

namespace fs = std::filesystem;
using biblio::FeatureKind;
using nlohmann::json;

std::vector<VariableSet> PipelineConfig::default_variable_sets() {
  return {
      {"words", {FeatureKind::title_word}},
      {"authors", {FeatureKind::author}},
      {"references", {FeatureKind::reference}},
      {"words+authors", {FeatureKind::title_word, FeatureKind::author}},
      {"words+authors+references", {FeatureKind::title_word, FeatureKind::author, FeatureKind::reference}},
  };
}

const biblio::FeatureSpec& PipelineConfig::spec_for(FeatureKind kind) const {
  switch (kind) {
    case FeatureKind::title_word:
      return title_word;
    case FeatureKind::author:
      return author;
    case FeatureKind::reference:
      return reference;
  }
  throw DomainError("unknown feature kind");
}

void PipelineConfig::validate() const {
  if (factors != 3) throw DomainError("the binning and measures stage needs factors = 3");
  if (bins < 2) throw DomainError("bins must be >= 2");
  if (!(ipf_tolerance > 0.0)) throw DomainError("ipf_tolerance must be > 0");
  if (ipf_max_iterations < 1) throw DomainError("ipf_max_iterations must be >= 1");
  if (threads < 1) throw DomainError("threads must be >= 1");
  if (variable_sets.empty()) throw DomainError("no variable sets configured");
  std::set<std::string> names;
  for (const auto& s : variable_sets) {
    if (s.name.empty() || s.kinds.empty()) throw DomainError("variable sets need a name and at least one feature");
    if (!names.insert(s.name).second) throw DomainError("duplicate variable set '" + s.name + "'");
  }
  for (const auto* spec : {&title_word, &author, &reference}) {
    if (spec->min_occurrence < 1) throw DomainError("min_occurrence must be >= 1");
  }
}

namespace {

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

void read_feature(const json& obj, biblio::FeatureSpec& spec, const std::string& base_dir) {
  const std::string where = std::string(biblio::to_string(spec.kind)) + " settings";
  check_keys(obj, {"min_occurrence", "stopwords", "mode"}, where);
  if (obj.contains("min_occurrence")) spec.min_occurrence = obj.at("min_occurrence").get<std::size_t>();
  if (obj.contains("stopwords")) {
    const auto& sw = obj.at("stopwords");
    if (sw.is_array()) {
      spec.stopwords.clear();
      for (const auto& w : sw) spec.stopwords.insert(biblio::normalize_name(w.get<std::string>()));
    } else if (sw.get<std::string>() == "default") {
      spec.stopwords = biblio::default_stopwords();
    } else if (sw.get<std::string>() == "none") {
      spec.stopwords.clear();
    } else {
      spec.stopwords = biblio::load_stopwords(resolve_path(sw.get<std::string>(), base_dir));
    }
  }
  if (obj.contains("mode")) {
    const auto mode = obj.at("mode").get<std::string>();
    if (mode == "full") {
      spec.reference_mode = biblio::ReferenceMode::full;
    } else if (mode == "source_title") {
      spec.reference_mode = biblio::ReferenceMode::source_title;
    } else {
      throw ParseError("reference mode must be 'full' or 'source_title'");
    }
  }
}

}  // namespace

PipelineConfig config_from_json(const std::string& text, const std::string& base_dir) {
  PipelineConfig cfg;
  try {
    const auto doc = json::parse(text);
    check_keys(doc,
               {"inputs", "output_dir", "factors", "bins", "ipf_tolerance", "ipf_max_iterations", "varimax_max_sweeps",
                "varimax_tolerance", "chart", "threads", "title_word", "author", "reference", "variable_sets"},
               "pipeline config");
    if (doc.contains("inputs")) {
      cfg.inputs.clear();
      for (const auto& p : doc.at("inputs")) cfg.inputs.push_back(resolve_path(p.get<std::string>(), base_dir));
    }
    if (doc.contains("output_dir")) cfg.output_dir = resolve_path(doc.at("output_dir").get<std::string>(), base_dir);
    if (doc.contains("factors")) cfg.factors = doc.at("factors").get<std::size_t>();
    if (doc.contains("bins")) cfg.bins = doc.at("bins").get<std::size_t>();
    if (doc.contains("ipf_tolerance")) cfg.ipf_tolerance = doc.at("ipf_tolerance").get<double>();
    if (doc.contains("ipf_max_iterations")) cfg.ipf_max_iterations = doc.at("ipf_max_iterations").get<std::size_t>();
    if (doc.contains("varimax_max_sweeps")) cfg.varimax_max_sweeps = doc.at("varimax_max_sweeps").get<std::size_t>();
    if (doc.contains("varimax_tolerance")) cfg.varimax_tolerance = doc.at("varimax_tolerance").get<double>();
    if (doc.contains("chart")) cfg.chart = doc.at("chart").get<bool>();
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<std::size_t>();
    if (doc.contains("title_word")) read_feature(doc.at("title_word"), cfg.title_word, base_dir);
    if (doc.contains("author")) read_feature(doc.at("author"), cfg.author, base_dir);
    if (doc.contains("reference")) read_feature(doc.at("reference"), cfg.reference, base_dir);
    if (doc.contains("variable_sets")) {
      cfg.variable_sets.clear();
      for (const auto& s : doc.at("variable_sets")) {
        check_keys(s, {"name", "features"}, "variable set");
        VariableSet vs{s.at("name").get<std::string>(), {}};
        for (const auto& f : s.at("features")) vs.kinds.push_back(biblio::parse_feature_kind(f.get<std::string>()));
        cfg.variable_sets.push_back(std::move(vs));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid pipeline config: ") + e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  return config_from_json(detail::read_file(path), fs::path(path).parent_path().string());
}

std::vector<biblio::DocRecord> read_corpus(const std::vector<std::string>& paths) {
  if (paths.empty()) throw DomainError("no input files");
  std::vector<biblio::DocRecord> docs;
  for (const auto& p : paths) {
    auto part = biblio::parse_records(detail::read_file(p));
    docs.insert(docs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::set<std::string> ids;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!docs[i].accession) docs[i].id = std::to_string(i + 1);
    if (!ids.insert(docs[i].id).second) throw ParseError("duplicate record id '" + docs[i].id + "' across inputs");
  }
  return docs;
}

std::string file_stem_for(const std::string& set_name) {
  std::string stem;
  for (char c : set_name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '+' || c == '.';
    stem += keep ? c : '_';
  }
  return stem;
}

namespace {

using Extracted = std::variant<factor::DataMatrix, std::string>;

std::string marginset_label() { return "factor1,factor2;factor1,factor3;factor2,factor3"; }

SetOutcome run_one(const VariableSet& set, const std::map<FeatureKind, Extracted>& matrices,
                   const PipelineConfig& cfg) {
  SetOutcome out{set.name, SetStatus::failed, std::nullopt, {}, {}};
  std::string stage = "juxtapose";
  try {
    std::vector<factor::DataMatrix> parts;
    for (auto kind : set.kinds) {
      const auto& m = matrices.at(kind);
      if (const auto* err = std::get_if<std::string>(&m)) {
        out.diagnostics.push_back("feature extraction failed: " + *err);
        return out;
      }
      parts.push_back(std::get<factor::DataMatrix>(m));
    }
    const auto combined = biblio::juxtapose(parts);

    std::vector<std::string> dropped;
    const auto data = factor::drop_constant_columns(combined, &dropped);
    if (!dropped.empty()) {
      out.diagnostics.push_back("dropped " + std::to_string(dropped.size()) + " constant column(s)");
    }
    if (data.variable_labels.size() < cfg.factors) {
      out.status = SetStatus::skipped;
      out.diagnostics.push_back("degenerate factor stage: " + std::to_string(data.variable_labels.size()) +
                                " non-constant variable(s), need at least " + std::to_string(cfg.factors));
      return out;
    }

    stage = "correlation";
    const auto corr = factor::correlation_matrix(data);
    stage = "factor extraction";
    const auto loadings = factor::extract_factors(corr, cfg.factors, data.variable_labels);
    stage = "varimax";
    const auto rotated = factor::varimax_rotate(loadings, cfg.varimax_max_sweeps, cfg.varimax_tolerance);
    stage = "binning";
    const auto table = factor::bin_loadings(rotated.rotated, cfg.bins);
    stage = "measures";
    auto report = full_report(table, cfg.ipf_tolerance, cfg.ipf_max_iterations);
    if (!report.ipf_converged) {
      out.diagnostics.push_back("IPF did not converge within " + std::to_string(cfg.ipf_max_iterations) +
                                " iterations");
    }

    auto doc = json::parse(to_json(report));
    std::vector<std::string> kinds;
    for (auto k : set.kinds) kinds.emplace_back(biblio::to_string(k));
    doc["variable_set"] = set.name;
    doc["metadata"] = {
        {"features", kinds},
        {"documents", data.case_labels.size()},
        {"variables", data.variable_labels.size()},
        {"dropped_constant_columns", dropped},
        {"matrix", "0/1 incidence"},
        {"extraction", "principal components of the correlation matrix"},
        {"rotation", "raw varimax (no Kaiser normalization)"},
        {"eigenvalues", loadings.eigenvalues},
        {"varimax_sweeps", rotated.sweeps},
        {"factors", cfg.factors},
        {"bins", cfg.bins},
        {"margins", marginset_label()},
    };
    out.report_json = doc.dump(2) + "\n";
    out.report = std::move(report);
    out.status = SetStatus::ok;
  } catch (const Error& e) {
    out.status = SetStatus::failed;
    out.diagnostics.push_back(stage + " failed: " + e.what());
  }
  return out;
}

}  // namespace

std::vector<SetOutcome> run_sets(const std::vector<biblio::DocRecord>& docs, const PipelineConfig& config) {
  config.validate();
  std::map<FeatureKind, Extracted> matrices;
  for (const auto& set : config.variable_sets) {
    for (auto kind : set.kinds) {
      if (matrices.count(kind)) continue;
      try {
        matrices.emplace(kind, biblio::extract_features(docs, config.spec_for(kind)));
      } catch (const Error& e) {
        matrices.emplace(kind, std::string(e.what()));
      }
    }
  }

  std::vector<SetOutcome> outcomes(config.variable_sets.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < outcomes.size(); i = next++) {
      outcomes[i] = run_one(config.variable_sets[i], matrices, config);
    }
  };
  const std::size_t n_threads = std::min(config.threads, outcomes.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  config.validate();
  const auto docs = read_corpus(config.inputs);

  PipelineResult result;
  result.sets = run_sets(docs, config);
  fs::create_directories(config.output_dir);

  std::vector<report::SetMeasures> bars;
  bool any_failed = false, any_unconverged = false;
  for (const auto& s : result.sets) {
    if (s.status != SetStatus::ok) {
      any_failed = true;
      continue;
    }
    const auto path = (fs::path(config.output_dir) / (file_stem_for(s.name) + ".json")).string();
    detail::write_file_atomic(path, s.report_json);
    result.written_files.push_back(path);
    bars.push_back({s.name, s.report->i, s.report->mu_star, s.report->r});
    any_unconverged = any_unconverged || !s.report->ipf_converged;
  }

  const auto summary = (fs::path(config.output_dir) / "summary.csv").string();
  detail::write_file_atomic(summary, report::summary_csv(bars));
  result.written_files.push_back(summary);
  if (config.chart) {
    const auto chart = (fs::path(config.output_dir) / "chart.svg").string();
    detail::write_file_atomic(
        chart, report::grouped_bar_svg(bars, "I and -mu* of the three-factor tables, per variable set"));
    result.written_files.push_back(chart);
  }
  result.exit_code = any_failed ? 3 : (any_unconverged ? 2 : 0);
  return result;
}

}  // namespace imprint::pipeline
