#pragma once

// Tagged bibliographic records (ISI / Web of Science plain-text export) and
// the document x feature incidence matrices built from them.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imprint/factor_model.hpp"

namespace imprint::biblio {

struct DocRecord {
  std::string id;                          // UT value, else the 1-based record ordinal
  std::optional<std::string> accession;    // the UT field, when present
  std::vector<std::string> authors;
  std::string title;
  std::vector<std::string> references;
  std::optional<int> year;
  // Tags the parser does not interpret, kept in input order with their lines.
  std::vector<std::pair<std::string, std::vector<std::string>>> other_fields;

  bool operator==(const DocRecord&) const = default;
};

// Grammar: optional FN/VR header lines; a two-character tag in columns 1-2,
// its value from column 4; continuation lines start with three spaces; "ER"
// closes a record and "EF" the file. AU and CR take one value per line, TI
// lines are joined with single spaces, PY is an integer year. Throws
// ParseError with a line number for an unterminated record.
std::vector<DocRecord> parse_records(std::string_view text);

// Canonical writer for the same format; parse_records(write_records(d)) == d.
std::string write_records(const std::vector<DocRecord>& docs);

enum class FeatureKind { title_word, author, reference };

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind parse_feature_kind(std::string_view name);

// How cited references are turned into feature strings.
enum class ReferenceMode {
  full,          // the whole normalized CR string
  source_title,  // the source (journal or book) field only
};

struct FeatureSpec {
  FeatureKind kind = FeatureKind::title_word;
  std::size_t min_occurrence = 1;  // document frequency threshold, inclusive
  std::set<std::string> stopwords;  // title words only, compared lowercased
  ReferenceMode reference_mode = ReferenceMode::full;

  std::string describe() const;
};

// The built-in English function-word list.
const std::set<std::string>& default_stopwords();
// One word per line; '#' starts a comment.
std::set<std::string> load_stopwords(const std::string& path);

// Lowercased title tokens split on non-alphanumeric ASCII bytes. Bytes >= 0x80
// count as word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize_title(std::string_view title);
// ASCII case-folded, trimmed, internal whitespace collapsed to one space.
std::string normalize_name(std::string_view text);
// The source field of a "Author, Year, Source, V1, P2" reference string.
std::string reference_source(std::string_view reference);

// Documents x features 0/1 matrix. Columns are features whose document
// frequency is >= min_occurrence, in lexicographic order; rows follow `docs`.
// Throws EmptyFeatureError if no feature survives.
factor::DataMatrix extract_features(const std::vector<DocRecord>& docs, const FeatureSpec& spec);

// Concatenates columns left to right. Labels become "<kind>:<label>" (a
// numeric suffix disambiguates repeated kinds). Throws AlignmentError when the
// case labels differ.
factor::DataMatrix juxtapose(const std::vector<factor::DataMatrix>& matrices);

}  // namespace imprint::biblio
