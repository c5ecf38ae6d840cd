#pragma once

// Shared fixtures for the test suites: named distributions, random table
// generators, and brute-force oracles that deliberately avoid the library's
// projection code.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "imprint/joint_table.hpp"

namespace imprint::testing {

inline std::vector<Axis> binary_axes(std::initializer_list<const char*> names) {
  std::vector<Axis> axes;
  for (const char* n : names) axes.push_back(Axis::indexed(n, 2));
  return axes;
}

// Z = X xor Y with X, Y independent fair bits.
inline JointTable xor_table() {
  return JointTable(binary_axes({"X", "Y", "Z"}), {0.25, 0, 0, 0.25, 0, 0.25, 0.25, 0});
}

// X = Y = Z, a fair bit.
inline JointTable copy_table() {
  return JointTable(binary_axes({"X", "Y", "Z"}), {0.5, 0, 0, 0, 0, 0, 0, 0.5});
}

inline JointTable independent_uniform() { return JointTable::uniform(binary_axes({"X", "Y", "Z"})); }

// Product of three arbitrary margins.
inline JointTable product_table(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
  std::vector<double> cells;
  for (double x : a)
    for (double y : b)
      for (double z : c) cells.push_back(x * y * z);
  return JointTable({Axis::indexed("A", a.size()), Axis::indexed("B", b.size()), Axis::indexed("C", c.size())},
                    std::move(cells));
}

// Strictly positive random table; cell weights are exponential draws.
inline JointTable random_table(std::mt19937_64& rng, const std::vector<std::size_t>& shape) {
  std::vector<Axis> axes;
  std::size_t n = 1;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    axes.push_back(Axis::indexed(std::string(1, static_cast<char>('A' + i)), shape[i]));
    n *= shape[i];
  }
  std::exponential_distribution<double> weight(1.0);
  std::vector<double> counts(n);
  for (auto& c : counts) c = weight(rng) + 1e-3;
  return JointTable::from_counts(std::move(axes), counts);
}

inline std::vector<std::size_t> random_shape(std::mt19937_64& rng, std::size_t rank, std::size_t lo, std::size_t hi) {
  std::uniform_int_distribution<std::size_t> card(lo, hi);
  std::vector<std::size_t> shape(rank);
  for (auto& s : shape) s = card(rng);
  return shape;
}

// Marginal entropy by decoding every flat index into its multi-index and
// accumulating into a map keyed by the kept coordinates.
inline double naive_entropy(const JointTable& t, const std::vector<std::size_t>& keep) {
  const auto shape = t.shape();
  std::map<std::vector<std::size_t>, double> marginal;
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    std::vector<std::size_t> idx(shape.size());
    std::size_t rest = flat;
    for (std::size_t ax = shape.size(); ax-- > 0;) {
      idx[ax] = rest % shape[ax];
      rest /= shape[ax];
    }
    std::vector<std::size_t> key;
    for (auto k : keep) key.push_back(idx[k]);
    marginal[key] += t.cells()[flat];
  }
  double h = 0.0;
  for (const auto& [_, p] : marginal)
    if (p > 0) h -= p * std::log(p) / std::log(2.0);
  return h;
}

// Inclusion-exclusion written out from the definition: for every non-empty
// subset T, add (-1)^(|T|+1) H(T).
inline double naive_co_information(const JointTable& t) {
  const std::size_t n = t.rank();
  double total = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> keep;
    for (std::size_t b = 0; b < n; ++b)
      if (mask >> b & 1u) keep.push_back(b);
    const double sign = std::pow(-1.0, static_cast<double>(keep.size() + 1));
    total += sign * naive_entropy(t, keep);
  }
  return total;
}

}  // namespace imprint::testing
