#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace imprint {

struct Axis {
  std::string name;
  std::vector<std::string> categories;

  std::size_t cardinality() const noexcept { return categories.size(); }

  // Axis with categories "0".."n-1".
  static Axis indexed(std::string name, std::size_t n);

  bool operator==(const Axis&) const = default;
};

// A non-empty set of axis names. Members keep the order they were given in;
// duplicates are rejected at construction.
class VariableSubset {
 public:
  VariableSubset(std::initializer_list<std::string> members);
  explicit VariableSubset(std::vector<std::string> members);

  const std::vector<std::string>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(const std::string& name) const;

  // Members sorted by name; the canonical form used for ordering constraints.
  VariableSubset sorted() const;
  std::string to_string() const;  // "A,B,C"

  bool operator==(const VariableSubset&) const = default;

 private:
  std::vector<std::string> members_;
};

// Dense n-dimensional probability table. Cells are stored row-major: the last
// axis varies fastest. Immutable after construction.
class JointTable {
 public:
  static constexpr double kNormalizationTolerance = 1e-9;

  // Probabilities must be non-negative and sum to 1 within
  // kNormalizationTolerance. They are stored as given.
  JointTable(std::vector<Axis> axes, std::vector<double> cells);

  // Non-negative weights divided exactly by their total.
  static JointTable from_counts(std::vector<Axis> axes, std::span<const double> counts);
  static JointTable uniform(std::vector<Axis> axes);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  std::span<const double> cells() const noexcept { return cells_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return cells_.size(); }

  std::size_t axis_index(const std::string& name) const;  // throws AxisNotFoundError
  // Axis positions for the subset, in ascending axis order.
  std::vector<std::size_t> resolve(const VariableSubset& subset) const;
  VariableSubset all_axes() const;

  double at(std::span<const std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const;
  std::vector<std::size_t> shape() const;

  bool operator==(const JointTable&) const = default;

 private:
  std::vector<Axis> axes_;
  std::vector<double> cells_;
};

// Maps every cell of a table of `shape` to the flat index of its projection
// onto the axes in `keep` (ascending). Shared by marginalization and IPF.
std::vector<std::size_t> projection_map(std::span<const std::size_t> shape,
                                        std::span<const std::size_t> keep);

// JSON: {"axes":[{"name":..,"categories":[..]}],"cells":[..]}; doubles are
// written in shortest round-trip form.
std::string to_json(const JointTable& table);
JointTable joint_table_from_json(const std::string& text);

// CSV: one column per axis holding the category label, then a `p` column.
std::string to_csv(const JointTable& table);
JointTable joint_table_from_csv(const std::string& text);

// Picks the format from the first non-blank character ('{' means JSON).
JointTable read_joint_table(const std::string& path);

}  // namespace imprint
