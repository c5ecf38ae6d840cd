#include "imprint/anticipatory_dynamics.hpp"

#include <cmath>
#include <random>

#include "imprint/detail/text.hpp"
#include "imprint/errors.hpp"

namespace imprint::dynamics {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::recursive:
      return "recursive";
    case Variant::incursive:
      return "incursive";
    case Variant::hyper_incursive:
      return "hyper_incursive";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "recursive") return Variant::recursive;
  if (name == "incursive") return Variant::incursive;
  if (name == "hyper_incursive" || name == "hyper-incursive") return Variant::hyper_incursive;
  throw DomainError("unknown variant '" + std::string(name) + "'");
}

void Params::validate() const {
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("x0 must lie in [0, 1], got " + detail::format_roundtrip(x0));
  if (!std::isfinite(a)) throw DomainError("a must be finite");
}

double recursive_step(double a, double x) noexcept { return a * x * (1.0 - x); }

double incursive_step(double a, double x) {
  if (!(a > 0.0)) throw DomainError("incursive map needs a > 0, got " + detail::format_roundtrip(a));
  return a * x / (1.0 + a * x);
}

double hyper_incursive_step(double a, double x, bool decision) {
  if (!(a > 0.0)) throw DomainError("hyper-incursive map needs a > 0, got " + detail::format_roundtrip(a));
  const double discriminant = 1.0 - 4.0 * x / a;
  if (discriminant < 0.0) {
    throw ComplexRootError("complex roots: a=" + detail::format_roundtrip(a) + ", x=" + detail::format_roundtrip(x) +
                           ", discriminant 1-(4/a)x=" + detail::format_roundtrip(discriminant));
  }
  const double upper = 0.5 + 0.5 * std::sqrt(discriminant);
  if (decision) return upper;
  // The roots multiply to x/a; dividing avoids cancellation in 1/2 - 1/2 sqrt(.).
  return (x / a) / upper;
}

double steady_state_incursive(double a) {
  if (!(a > 0.0)) throw DomainError("steady state needs a > 0");
  return (a - 1.0) / a;
}

Trajectory simulate(const Params& params, Variant variant, const DecisionSource& decisions) {
  params.validate();
  if (variant != Variant::recursive && !(params.a > 0.0)) {
    throw DomainError(std::string(to_string(variant)) + " map needs a > 0");
  }

  Trajectory tr;
  tr.variant = variant;
  tr.a = params.a;
  tr.values.reserve(params.steps + 1);
  tr.values.push_back(params.x0);

  const std::vector<bool>* explicit_bits = std::get_if<std::vector<bool>>(&decisions);
  std::mt19937_64 rng(explicit_bits ? 0 : std::get<std::uint64_t>(decisions));
  if (variant == Variant::hyper_incursive) {
    if (explicit_bits && explicit_bits->size() < params.steps) {
      throw DomainError("need " + std::to_string(params.steps) + " decisions, got " +
                        std::to_string(explicit_bits->size()));
    }
    tr.decisions.emplace();
    tr.decisions->reserve(params.steps);
  }

  double x = params.x0;
  for (std::size_t t = 0; t < params.steps; ++t) {
    switch (variant) {
      case Variant::recursive:
        x = recursive_step(params.a, x);
        break;
      case Variant::incursive:
        x = incursive_step(params.a, x);
        break;
      case Variant::hyper_incursive: {
        const bool bit = explicit_bits ? (*explicit_bits)[t] : (rng() >> 63) != 0;
        try {
          x = hyper_incursive_step(params.a, x, bit);
        } catch (const ComplexRootError& e) {
          tr.truncated = true;
          tr.truncation_reason = "step " + std::to_string(t) + ": " + e.what();
          return tr;
        }
        tr.decisions->push_back(bit);
        break;
      }
    }
    if (!(x >= 0.0 && x <= 1.0)) tr.out_of_range = true;
    tr.values.push_back(x);
  }
  return tr;
}

std::string to_csv(const Trajectory& trajectory, bool with_a, bool header) {
  std::string out;
  if (header) out += with_a ? "a,t,x,decision\n" : "t,x,decision\n";
  const std::string a = detail::format_roundtrip(trajectory.a);
  for (std::size_t t = 0; t < trajectory.values.size(); ++t) {
    if (with_a) out += a + ",";
    out += std::to_string(t) + "," + detail::format_roundtrip(trajectory.values[t]) + ",";
    // decision[t] produced values[t+1]; the final state has none.
    if (trajectory.decisions && t < trajectory.decisions->size()) out += (*trajectory.decisions)[t] ? "1" : "0";
    out += "\n";
  }
  return out;
}

}  // namespace imprint::dynamics
