#include "imprint/biblio_ingest.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>

#include "imprint/errors.hpp"

namespace imprint::biblio {

namespace {

std::string_view rstrip(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view strip(std::string_view s) {
  s = rstrip(s);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool is_tag_char(char c) {
  return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
}

struct RawField {
  std::string tag;
  std::vector<std::string> lines;
  std::size_t line_no = 0;
};

DocRecord build_record(std::vector<RawField>& fields, std::size_t ordinal) {
  DocRecord doc;
  std::vector<std::string> title_parts;
  for (auto& f : fields) {
    if (f.tag == "AU") {
      doc.authors.insert(doc.authors.end(), f.lines.begin(), f.lines.end());
    } else if (f.tag == "CR") {
      doc.references.insert(doc.references.end(), f.lines.begin(), f.lines.end());
    } else if (f.tag == "TI") {
      title_parts.insert(title_parts.end(), f.lines.begin(), f.lines.end());
    } else if (f.tag == "PY") {
      const auto value = strip(f.lines.front());
      int year = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), year);
      if (ec != std::errc() || ptr != value.data() + value.size() || f.lines.size() != 1) {
        throw ParseError("PY is not an integer year", f.line_no);
      }
      doc.year = year;
    } else if (f.tag == "UT") {
      std::string ut;
      for (const auto& l : f.lines) ut += std::string(strip(l));
      doc.accession = ut;
    } else {
      doc.other_fields.emplace_back(f.tag, std::move(f.lines));
    }
  }
  for (std::size_t i = 0; i < title_parts.size(); ++i) {
    if (i) doc.title += ' ';
    doc.title += title_parts[i];
  }
  doc.id = doc.accession ? *doc.accession : std::to_string(ordinal);
  return doc;
}

}  // namespace

std::vector<DocRecord> parse_records(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<DocRecord> docs;
  std::map<std::string, std::size_t> ids;
  std::vector<RawField> fields;
  bool open = false;
  std::size_t line_no = 0;

  auto close_record = [&](std::size_t at) {
    auto doc = build_record(fields, docs.size() + 1);
    if (!ids.emplace(doc.id, at).second) throw ParseError("duplicate record id '" + doc.id + "'", at);
    docs.push_back(std::move(doc));
    fields.clear();
    open = false;
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto line = rstrip(raw);
    if (strip(line).empty()) continue;

    if (line.starts_with("   ")) {
      if (!open || fields.empty()) throw ParseError("continuation line outside a field", line_no);
      fields.back().lines.emplace_back(line.substr(3));
      continue;
    }
    if (line.size() < 2 || !is_tag_char(line[0]) || !is_tag_char(line[1]) || (line.size() > 2 && line[2] != ' ')) {
      throw ParseError("expected a two-character field tag", line_no);
    }
    const std::string tag(line.substr(0, 2));
    const std::string value(line.size() > 3 ? line.substr(3) : std::string_view{});

    if (tag == "EF") {
      if (open) throw ParseError("missing ER before EF", line_no);
      return docs;
    }
    if (tag == "ER") {
      // A bare ER is a record without fields, which the writer can produce.
      close_record(line_no);
      continue;
    }
    if (!open && (tag == "FN" || tag == "VR")) continue;
    open = true;
    fields.push_back(RawField{tag, {value}, line_no});
  }
  if (open) throw ParseError("missing ER at end of input", line_no);
  return docs;
}

std::string write_records(const std::vector<DocRecord>& docs) {
  std::string out = "FN Thomson Reuters Web of Science\nVR 1.0\n";
  auto field = [&out](std::string_view tag, const std::vector<std::string>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out += i == 0 ? std::string(tag) + " " : std::string("   ");
      out += lines[i];
      out += '\n';
    }
  };
  for (const auto& d : docs) {
    for (const auto& [tag, lines] : d.other_fields) field(tag, lines);
    field("AU", d.authors);
    if (!d.title.empty()) field("TI", {d.title});
    field("CR", d.references);
    if (d.year) field("PY", {std::to_string(*d.year)});
    if (d.accession) field("UT", {*d.accession});
    out += "ER\n\n";
  }
  out += "EF\n";
  return out;
}

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::title_word:
      return "title_word";
    case FeatureKind::author:
      return "author";
    case FeatureKind::reference:
      return "reference";
  }
  return "unknown";
}

FeatureKind parse_feature_kind(std::string_view name) {
  if (name == "title_word" || name == "word" || name == "words") return FeatureKind::title_word;
  if (name == "author" || name == "authors") return FeatureKind::author;
  if (name == "reference" || name == "references") return FeatureKind::reference;
  throw DomainError("unknown feature kind '" + std::string(name) + "'");
}

std::string FeatureSpec::describe() const {
  std::string s = std::string(to_string(kind)) + " (min_occurrence=" + std::to_string(min_occurrence);
  if (kind == FeatureKind::reference) {
    s += reference_mode == ReferenceMode::full ? ", mode=full" : ", mode=source_title";
  }
  return s + ")";
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stopword list '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto w = normalize_name(line);
    if (!w.empty()) words.insert(w);
  }
  return words;
}

std::vector<std::string> tokenize_title(std::string_view title) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : title) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string normalize_name(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

std::string reference_source(std::string_view reference) {
  std::size_t start = 0;
  for (int field = 0; field < 2; ++field) {
    const auto comma = reference.find(',', start);
    if (comma == std::string_view::npos) return std::string(strip(reference));
    start = comma + 1;
  }
  const auto end = reference.find(',', start);
  return std::string(strip(reference.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
}

namespace {

std::set<std::string> document_features(const DocRecord& doc, const FeatureSpec& spec) {
  std::set<std::string> features;
  switch (spec.kind) {
    case FeatureKind::title_word:
      for (auto& t : tokenize_title(doc.title)) {
        if (!spec.stopwords.count(t)) features.insert(std::move(t));
      }
      break;
    case FeatureKind::author:
      for (const auto& a : doc.authors) features.insert(normalize_name(a));
      break;
    case FeatureKind::reference:
      for (const auto& r : doc.references) {
        features.insert(normalize_name(spec.reference_mode == ReferenceMode::full ? r : reference_source(r)));
      }
      break;
  }
  features.erase("");
  return features;
}

}  // namespace

factor::DataMatrix extract_features(const std::vector<DocRecord>& docs, const FeatureSpec& spec) {
  if (docs.empty()) throw DomainError("no documents to extract features from");
  if (spec.min_occurrence < 1) throw DomainError("min_occurrence must be >= 1");

  std::vector<std::set<std::string>> per_doc;
  std::map<std::string, std::size_t> frequency;
  for (const auto& d : docs) {
    per_doc.push_back(document_features(d, spec));
    for (const auto& f : per_doc.back()) ++frequency[f];
  }

  factor::DataMatrix out;
  out.kind = std::string(to_string(spec.kind));
  std::map<std::string, std::size_t> column;
  for (const auto& [feature, df] : frequency) {
    if (df >= spec.min_occurrence) {
      column.emplace(feature, out.variable_labels.size());
      out.variable_labels.push_back(feature);
    }
  }
  if (out.variable_labels.empty()) throw EmptyFeatureError("no features survive " + spec.describe());

  out.values = factor::Matrix(docs.size(), out.variable_labels.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out.case_labels.push_back(docs[i].id);
    for (const auto& f : per_doc[i]) {
      if (auto it = column.find(f); it != column.end()) out.values(i, it->second) = 1.0;
    }
  }
  return out;
}

factor::DataMatrix juxtapose(const std::vector<factor::DataMatrix>& matrices) {
  if (matrices.empty()) throw DomainError("nothing to juxtapose");
  const auto& cases = matrices.front().case_labels;
  std::size_t total_cols = 0;
  for (const auto& m : matrices) {
    m.validate();
    const std::size_t common = std::min(cases.size(), m.case_labels.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (m.case_labels[i] != cases[i]) {
        throw AlignmentError("case labels differ at row " + std::to_string(i + 1) + ": '" + cases[i] + "' vs '" +
                             m.case_labels[i] + "'");
      }
    }
    if (m.case_labels.size() != cases.size()) {
      const auto& longer = m.case_labels.size() > cases.size() ? m.case_labels : cases;
      throw AlignmentError("case counts differ; first unmatched case '" + longer[common] + "'");
    }
    total_cols += m.values.cols();
  }

  factor::DataMatrix out;
  out.case_labels = cases;
  out.values = factor::Matrix(cases.size(), total_cols);
  std::map<std::string, int> seen_kinds;
  std::size_t offset = 0;
  for (std::size_t idx = 0; idx < matrices.size(); ++idx) {
    const auto& m = matrices[idx];
    std::string prefix = m.kind.empty() ? "m" + std::to_string(idx + 1) : m.kind;
    if (const int n = ++seen_kinds[prefix]; n > 1) prefix += "#" + std::to_string(n);
    if (!out.kind.empty()) out.kind += '+';
    out.kind += prefix;
    for (std::size_t j = 0; j < m.values.cols(); ++j) {
      out.variable_labels.push_back(prefix + ":" + m.variable_labels[j]);
      for (std::size_t i = 0; i < cases.size(); ++i) out.values(i, offset + j) = m.values(i, j);
    }
    offset += m.values.cols();
  }
  out.validate();
  return out;
}

}  // namespace imprint::biblio
