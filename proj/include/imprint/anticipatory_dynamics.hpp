#pragma once

// Recursive, incursive and hyper-incursive logistic maps.
//
//   recursive        x[t+1] = a x[t] (1 - x[t])
//   incursive        x[t+1] = a x[t] (1 - x[t+1])  =>  x[t+1] = a x[t] / (1 + a x[t])
//   hyper-incursive  x[t]   = a x[t+1] (1 - x[t+1])
//                    =>  x[t+1] = 1/2 +- 1/2 sqrt(1 - (4/a) x[t])

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace imprint::dynamics {

enum class Variant { recursive, incursive, hyper_incursive };

std::string_view to_string(Variant v) noexcept;
Variant parse_variant(std::string_view name);  // throws DomainError

struct Params {
  double a = 4.0;
  double x0 = 0.5;
  std::size_t steps = 1;

  void validate() const;  // steps >= 1, x0 in [0, 1]
};

// Either an explicit root-selection bit per step or a seed for the generator.
using DecisionSource = std::variant<std::vector<bool>, std::uint64_t>;

struct Trajectory {
  Variant variant = Variant::recursive;
  double a = 0.0;
  std::vector<double> values;  // x_0 .. x_T
  // Hyper-incursive only: one bit per step taken (true selects the + root).
  std::optional<std::vector<bool>> decisions;
  // Hyper-incursive run stopped at a complex root; values hold the prefix.
  bool truncated = false;
  std::string truncation_reason;
  // Some value left [0, 1] (possible for the recursive map with a > 4).
  bool out_of_range = false;
};

double recursive_step(double a, double x) noexcept;

// Solved incursive update a x / (1 + a x). Requires a > 0.
double incursive_step(double a, double x);

// The root selected by `decision` (true: +, false: -). Throws
// ComplexRootError when (4/a) x > 1.
double hyper_incursive_step(double a, double x, bool decision);

// Nonzero fixed point (a - 1)/a of the incursive map.
double steady_state_incursive(double a);

// values[0] = x0, values[t+1] = step(values[t]). For the hyper-incursive map
// explicit decisions take precedence over a seed; with a seed the bits come
// from a 64-bit Mersenne Twister. A complex root ends the run early with
// `truncated` set instead of throwing.
Trajectory simulate(const Params& params, Variant variant, const DecisionSource& decisions = std::uint64_t{0});

// CSV with columns t,x,decision (decision empty for non-hyper-incursive).
// With `with_a` set, a leading `a` column is added for long-format sweeps.
std::string to_csv(const Trajectory& trajectory, bool with_a = false, bool header = true);

}  // namespace imprint::dynamics
