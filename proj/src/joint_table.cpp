#include "imprint/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "imprint/detail/text.hpp"
#include "imprint/errors.hpp"

namespace imprint {

using nlohmann::json;

Axis Axis::indexed(std::string name, std::size_t n) {
  Axis axis{std::move(name), {}};
  axis.categories.reserve(n);
  for (std::size_t i = 0; i < n; ++i) axis.categories.push_back(std::to_string(i));
  return axis;
}

VariableSubset::VariableSubset(std::initializer_list<std::string> members)
    : VariableSubset(std::vector<std::string>(members)) {}

VariableSubset::VariableSubset(std::vector<std::string> members) : members_(std::move(members)) {
  if (members_.empty()) throw InvalidSubsetsError("variable subset must not be empty");
  std::set<std::string> seen;
  for (const auto& m : members_) {
    if (!seen.insert(m).second) throw InvalidSubsetsError("duplicate axis '" + m + "' in subset");
  }
}

bool VariableSubset::contains(const std::string& name) const {
  return std::find(members_.begin(), members_.end(), name) != members_.end();
}

VariableSubset VariableSubset::sorted() const {
  auto m = members_;
  std::sort(m.begin(), m.end());
  return VariableSubset(std::move(m));
}

std::string VariableSubset::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ',';
    s += members_[i];
  }
  return s;
}

namespace {

std::size_t cell_count(const std::vector<Axis>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.cardinality();
  return n;
}

void validate_axes(const std::vector<Axis>& axes) {
  if (axes.empty()) throw InvalidTableError("table needs at least one axis");
  std::set<std::string> names;
  for (const auto& a : axes) {
    if (a.name.empty()) throw InvalidTableError("axis name must not be empty");
    if (!names.insert(a.name).second) throw InvalidTableError("duplicate axis name '" + a.name + "'");
    if (a.categories.empty()) throw InvalidTableError("axis '" + a.name + "' has no categories");
    std::set<std::string> cats(a.categories.begin(), a.categories.end());
    if (cats.size() != a.categories.size()) {
      throw InvalidTableError("axis '" + a.name + "' has duplicate category labels");
    }
  }
}

}  // namespace

JointTable::JointTable(std::vector<Axis> axes, std::vector<double> cells)
    : axes_(std::move(axes)), cells_(std::move(cells)) {
  validate_axes(axes_);
  if (cells_.size() != cell_count(axes_)) {
    throw InvalidTableError("expected " + std::to_string(cell_count(axes_)) + " cells, got " +
                            std::to_string(cells_.size()));
  }
  double total = 0.0;
  for (double p : cells_) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidTableError("cell probabilities must be finite and >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw InvalidTableError("cells sum to " + detail::format_roundtrip(total) + ", not 1");
  }
}

JointTable JointTable::from_counts(std::vector<Axis> axes, std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidTableError("counts must be finite and >= 0");
    total += c;
  }
  if (total <= 0.0) throw InvalidTableError("counts sum to zero");
  std::vector<double> cells(counts.begin(), counts.end());
  for (double& c : cells) c /= total;
  return JointTable(std::move(axes), std::move(cells));
}

JointTable JointTable::uniform(std::vector<Axis> axes) {
  validate_axes(axes);
  const std::size_t n = cell_count(axes);
  return JointTable(std::move(axes), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t JointTable::axis_index(const std::string& name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i].name == name) return i;
  }
  throw AxisNotFoundError("no axis named '" + name + "'");
}

std::vector<std::size_t> JointTable::resolve(const VariableSubset& subset) const {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& m : subset.members()) idx.push_back(axis_index(m));
  std::sort(idx.begin(), idx.end());
  return idx;
}

VariableSubset JointTable::all_axes() const {
  std::vector<std::string> names;
  for (const auto& a : axes_) names.push_back(a.name);
  return VariableSubset(std::move(names));
}

std::vector<std::size_t> JointTable::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes_) s.push_back(a.cardinality());
  return s;
}

double JointTable::at(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw ArityError("index rank does not match table rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (index[i] >= axes_[i].cardinality()) throw std::out_of_range("cell index out of range");
    flat = flat * axes_[i].cardinality() + index[i];
  }
  return cells_[flat];
}

double JointTable::at(std::initializer_list<std::size_t> index) const {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

std::vector<std::size_t> projection_map(std::span<const std::size_t> shape,
                                        std::span<const std::size_t> keep) {
  std::size_t total = 1;
  for (auto s : shape) total *= s;

  // Stride of each kept axis inside the projected (row-major) table.
  std::vector<std::size_t> stride(shape.size(), 0);
  std::size_t acc = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    stride[keep[k]] = acc;
    acc *= shape[keep[k]];
  }

  std::vector<std::size_t> map(total);
  std::vector<std::size_t> counter(shape.size(), 0);
  std::size_t target = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    map[flat] = target;
    // Odometer increment, last axis fastest.
    for (std::size_t ax = shape.size(); ax-- > 0;) {
      ++counter[ax];
      target += stride[ax];
      if (counter[ax] < shape[ax]) break;
      target -= stride[ax] * counter[ax];
      counter[ax] = 0;
    }
  }
  return map;
}

std::string to_json(const JointTable& table) {
  json axes = json::array();
  for (const auto& a : table.axes()) axes.push_back({{"name", a.name}, {"categories", a.categories}});
  json doc;
  doc["axes"] = std::move(axes);
  doc["cells"] = std::vector<double>(table.cells().begin(), table.cells().end());
  return doc.dump();
}

JointTable joint_table_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    std::vector<Axis> axes;
    for (const auto& a : doc.at("axes")) {
      Axis axis;
      axis.name = a.at("name").get<std::string>();
      if (a.contains("categories")) {
        axis.categories = a.at("categories").get<std::vector<std::string>>();
      } else {
        axis = Axis::indexed(axis.name, a.at("cardinality").get<std::size_t>());
      }
      axes.push_back(std::move(axis));
    }
    auto cells = doc.at("cells").get<std::vector<double>>();
    return JointTable(std::move(axes), std::move(cells));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed joint table: ") + e.what());
  }
}

std::string to_csv(const JointTable& table) {
  std::vector<std::string> header;
  for (const auto& a : table.axes()) header.push_back(a.name);
  header.push_back("p");
  std::string out = detail::csv_join(header) + "\n";

  const auto shape = table.shape();
  std::vector<std::size_t> counter(shape.size(), 0);
  for (std::size_t flat = 0; flat < table.size(); ++flat) {
    std::vector<std::string> row;
    for (std::size_t ax = 0; ax < shape.size(); ++ax) row.push_back(table.axes()[ax].categories[counter[ax]]);
    row.push_back(detail::format_roundtrip(table.cells()[flat]));
    out += detail::csv_join(row) + "\n";
    for (std::size_t ax = shape.size(); ax-- > 0;) {
      if (++counter[ax] < shape[ax]) break;
      counter[ax] = 0;
    }
  }
  return out;
}

JointTable joint_table_from_csv(const std::string& text) {
  const auto rows = detail::csv_parse(text);
  if (rows.empty()) throw ParseError("empty CSV");
  const auto& header = rows.front();
  if (header.size() < 2 || header.back() != "p") {
    throw ParseError("CSV header must list axis columns followed by 'p'", 1);
  }
  const std::size_t rank = header.size() - 1;

  // Categories are ordered by first appearance.
  std::vector<Axis> axes(rank);
  std::vector<std::map<std::string, std::size_t>> lookup(rank);
  for (std::size_t ax = 0; ax < rank; ++ax) axes[ax].name = header[ax];
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) throw ParseError("wrong number of fields", r + 1);
    for (std::size_t ax = 0; ax < rank; ++ax) {
      if (lookup[ax].emplace(rows[r][ax], axes[ax].categories.size()).second) {
        axes[ax].categories.push_back(rows[r][ax]);
      }
    }
  }
  if (rows.size() < 2) throw ParseError("CSV has no data rows");

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.cardinality();
  std::vector<double> cells(total, 0.0);
  std::vector<bool> seen(total, false);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::size_t flat = 0;
    for (std::size_t ax = 0; ax < rank; ++ax) flat = flat * axes[ax].cardinality() + lookup[ax].at(rows[r][ax]);
    if (seen[flat]) throw ParseError("duplicate cell", r + 1);
    seen[flat] = true;
    try {
      cells[flat] = detail::parse_double(rows[r].back());
    } catch (const ParseError& e) {
      throw ParseError(e.what(), r + 1);
    }
  }
  return JointTable(std::move(axes), std::move(cells));
}

JointTable read_joint_table(const std::string& path) {
  const std::string text = detail::read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return joint_table_from_json(text);
  return joint_table_from_csv(text);
}

}  // namespace imprint
