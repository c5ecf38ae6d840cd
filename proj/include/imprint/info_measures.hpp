#pragma once

// Exact discrete information measures over a JointTable, all in bits.

#include <cstddef>

#include "imprint/joint_table.hpp"

namespace imprint {

// Largest subset accepted by co_information (it evaluates 2^|S| - 1 entropies).
inline constexpr std::size_t kMaxCoInformationArity = 16;

// Marginal table on `subset`. Axes keep the source table's order.
JointTable marginalize(const JointTable& table, const VariableSubset& subset);

// -sum q log2 q over the marginal on `subset`, with 0 log 0 = 0.
double entropy(const JointTable& table, const VariableSubset& subset);

// H(x) + H(y) - H(x u y). Throws InvalidSubsetsError when x and y overlap.
double transmission(const JointTable& table, const VariableSubset& x, const VariableSubset& y);

// Signed inclusion-exclusion over every non-empty T of `subset`:
//   mu* = -sum_T (-1)^|T| H(T)
// Equals transmission for two variables. Requires 2 <= |subset| <= 16.
double co_information(const JointTable& table, const VariableSubset& subset);

// Q = -mu*.
double q_measure(const JointTable& table, const VariableSubset& subset);

}  // namespace imprint
