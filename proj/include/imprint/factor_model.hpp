#pragma once

// Principal-component factor model: Pearson correlations, cyclic Jacobi
// eigendecomposition, raw varimax rotation, and binning of three-factor
// loadings into a joint probability table.

#include <cstddef>
#include <string>
#include <vector>

#include "imprint/joint_table.hpp"

namespace imprint::factor {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const noexcept { return data_; }

  Matrix transpose() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Cases x variables.
struct DataMatrix {
  std::vector<std::string> case_labels;
  std::vector<std::string> variable_labels;
  Matrix values;
  // Feature kind the columns came from ("title_word", "author", ...); empty
  // for generic data.
  std::string kind;

  void validate() const;
};

struct LoadingsMatrix {
  std::vector<std::string> variable_labels;
  Matrix loadings;                   // variables x k
  std::vector<double> eigenvalues;   // k, before rotation, descending

  std::size_t k() const noexcept { return loadings.cols(); }
  std::vector<double> communalities() const;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
  std::size_t sweeps = 0;
};

inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr std::size_t kJacobiMaxSweeps = 100;

// Cyclic Jacobi for symmetric matrices. Stops once the off-diagonal
// Frobenius norm is at most `tolerance` times the full Frobenius norm;
// throws NumericError if that takes more than `max_sweeps` sweeps.
EigenDecomposition symmetric_eigen(const Matrix& symmetric, double tolerance = kJacobiTolerance,
                                   std::size_t max_sweeps = kJacobiMaxSweeps);

// Pearson correlations between the columns. Throws DomainError naming the
// first zero-variance variable.
Matrix correlation_matrix(const DataMatrix& data);

// Top-k principal components of a correlation matrix scaled to loadings
// (eigenvector * sqrt(eigenvalue)); each column's largest-magnitude entry is
// made positive.
LoadingsMatrix extract_factors(const Matrix& corr, std::size_t k, std::vector<std::string> variable_labels = {});

// Raw varimax criterion: sum_j [ sum_i l_ij^4 / n - (sum_i l_ij^2 / n)^2 ].
double varimax_criterion(const Matrix& loadings);

struct VarimaxResult {
  LoadingsMatrix rotated;
  Matrix rotation;                  // k x k orthogonal, rotated = loadings * rotation
  std::vector<double> criterion;    // before the first sweep, then after each sweep
  std::size_t sweeps = 0;
};

inline constexpr std::size_t kVarimaxMaxSweeps = 100;
inline constexpr double kVarimaxTolerance = 1e-12;

// Pairwise planar rotations, each maximizing the criterion for its column
// pair, until a whole sweep gains less than `tol`. No Kaiser row
// normalization. Column signs follow the same convention as extract_factors;
// k = 1 input is returned unchanged.
VarimaxResult varimax_rotate(const LoadingsMatrix& loadings, std::size_t max_sweeps = kVarimaxMaxSweeps,
                             double tol = kVarimaxTolerance);

// Bin index of one loading in `bins` equal-width half-open bins over [-1, 1]
// with the top bin closed. Values outside [-1, 1] are clamped first.
std::size_t loading_bin(double loading, std::size_t bins = 10);

// One unit count per variable in cell (b1, b2, b3), normalized by the
// variable count. Axes are named factor1..factor3. Requires k = 3.
JointTable bin_loadings(const LoadingsMatrix& loadings, std::size_t bins = 10);

// Drops zero-variance columns; their labels are appended to `dropped`.
DataMatrix drop_constant_columns(const DataMatrix& data, std::vector<std::string>* dropped = nullptr);

// Header row of variable labels (first cell "case"), then one row per case.
std::string to_csv(const DataMatrix& data);
DataMatrix data_matrix_from_csv(const std::string& text);

// Variables as rows, factors as columns, then an "eigenvalue" footer row.
std::string to_csv(const LoadingsMatrix& loadings);
LoadingsMatrix loadings_from_csv(const std::string& text);

}  // namespace imprint::factor
