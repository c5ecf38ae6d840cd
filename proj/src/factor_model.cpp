#include "imprint/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "imprint/detail/text.hpp"
#include "imprint/errors.hpp"

namespace imprint::factor {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw InvalidTableError("matrix data size does not match its shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ArityError("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

void DataMatrix::validate() const {
  if (case_labels.size() != values.rows() || variable_labels.size() != values.cols()) {
    throw InvalidTableError("label counts do not match the matrix shape");
  }
  std::set<std::string> seen;
  for (const auto& v : variable_labels) {
    if (!seen.insert(v).second) throw InvalidTableError("duplicate variable label '" + v + "'");
  }
}

std::vector<double> LoadingsMatrix::communalities() const {
  std::vector<double> h(loadings.rows(), 0.0);
  for (std::size_t i = 0; i < loadings.rows(); ++i)
    for (std::size_t j = 0; j < loadings.cols(); ++j) h[i] += loadings(i, j) * loadings(i, j);
  return h;
}

EigenDecomposition symmetric_eigen(const Matrix& symmetric, double tolerance, std::size_t max_sweeps) {
  const std::size_t n = symmetric.rows();
  if (symmetric.cols() != n) throw ArityError("eigendecomposition needs a square matrix");
  Matrix a = symmetric;
  Matrix v = Matrix::identity(n);

  double norm = 0.0;
  for (double x : a.data()) norm += x * x;
  norm = std::sqrt(norm);

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  std::size_t sweeps = 0;
  while (off_norm() > tolerance * norm) {
    if (sweeps == max_sweeps) {
      throw NumericError("Jacobi eigensolver did not converge in " + std::to_string(max_sweeps) + " sweeps");
    }
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // a <- J^T a J with J(p,p) = J(q,q) = c, J(p,q) = s, J(q,p) = -s.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n), sweeps};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

Matrix correlation_matrix(const DataMatrix& data) {
  data.validate();
  const std::size_t n = data.values.rows();
  const std::size_t m = data.values.cols();
  if (n < 2) throw DomainError("correlation needs at least 2 cases");

  Matrix centered(n, m);
  std::vector<double> scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += data.values(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      centered(i, j) = data.values(i, j) - mean;
      ss += centered(i, j) * centered(i, j);
    }
    if (!(ss > 0.0)) throw DomainError("variable '" + data.variable_labels[j] + "' has zero variance");
    scale[j] = std::sqrt(ss);
  }

  Matrix corr(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    corr(a, a) = 1.0;
    for (std::size_t b = a + 1; b < m; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += centered(i, a) * centered(i, b);
      const double r = std::clamp(s / (scale[a] * scale[b]), -1.0, 1.0);
      corr(a, b) = corr(b, a) = r;
    }
  }
  return corr;
}

namespace {

// Flips each column so that its largest-magnitude entry is positive.
void normalize_signs(Matrix& loadings, Matrix* rotation) {
  for (std::size_t j = 0; j < loadings.cols(); ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < loadings.rows(); ++i) {
      if (std::abs(loadings(i, j)) > std::abs(loadings(arg, j))) arg = i;
    }
    if (loadings.rows() == 0 || loadings(arg, j) >= 0.0) continue;
    for (std::size_t i = 0; i < loadings.rows(); ++i) loadings(i, j) = -loadings(i, j);
    if (rotation) {
      for (std::size_t i = 0; i < rotation->rows(); ++i) (*rotation)(i, j) = -(*rotation)(i, j);
    }
  }
}

}  // namespace

LoadingsMatrix extract_factors(const Matrix& corr, std::size_t k, std::vector<std::string> variable_labels) {
  const std::size_t m = corr.rows();
  if (corr.cols() != m) throw ArityError("correlation matrix must be square");
  if (k < 1 || k > m) {
    throw ArityError("cannot extract " + std::to_string(k) + " factors from " + std::to_string(m) + " variables");
  }
  if (variable_labels.empty()) {
    for (std::size_t i = 0; i < m; ++i) variable_labels.push_back("v" + std::to_string(i + 1));
  }
  if (variable_labels.size() != m) throw ArityError("variable label count does not match the matrix");

  const auto eig = symmetric_eigen(corr);
  LoadingsMatrix out{std::move(variable_labels), Matrix(m, k), {}};
  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = eig.values[j];
    out.eigenvalues.push_back(lambda);
    const double s = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t i = 0; i < m; ++i) out.loadings(i, j) = eig.vectors(i, j) * s;
  }
  normalize_signs(out.loadings, nullptr);
  return out;
}

double varimax_criterion(const Matrix& loadings) {
  const double n = static_cast<double>(loadings.rows());
  double total = 0.0;
  for (std::size_t j = 0; j < loadings.cols(); ++j) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < loadings.rows(); ++i) {
      const double sq = loadings(i, j) * loadings(i, j);
      s2 += sq;
      s4 += sq * sq;
    }
    total += s4 / n - (s2 / n) * (s2 / n);
  }
  return total;
}

VarimaxResult varimax_rotate(const LoadingsMatrix& loadings, std::size_t max_sweeps, double tol) {
  const std::size_t k = loadings.k();
  const std::size_t m = loadings.loadings.rows();
  VarimaxResult result{loadings, Matrix::identity(k), {}, 0};
  Matrix& l = result.rotated.loadings;
  result.criterion.push_back(varimax_criterion(l));
  if (k < 2 || m == 0) return result;

  const double n = static_cast<double>(m);
  while (result.sweeps < max_sweeps) {
    const Matrix l_before = l, rotation_before = result.rotation;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = l(i, p), y = l(i, q);
          const double u = x * x - y * y;
          const double v = 2.0 * x * y;
          a += u;
          b += v;
          c += u * u - v * v;
          d += 2.0 * u * v;
        }
        // The pair criterion is a sinusoid in 4*phi; atan2 picks its maximum.
        const double phi = 0.25 * std::atan2(d - 2.0 * a * b / n, c - (a * a - b * b) / n);
        if (phi == 0.0) continue;
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (std::size_t i = 0; i < m; ++i) {
          const double x = l(i, p), y = l(i, q);
          l(i, p) = cs * x + sn * y;
          l(i, q) = -sn * x + cs * y;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double x = result.rotation(i, p), y = result.rotation(i, q);
          result.rotation(i, p) = cs * x + sn * y;
          result.rotation(i, q) = -sn * x + cs * y;
        }
      }
    }
    const double criterion = varimax_criterion(l);
    // At the optimum the rotations are rounding noise and can cost an ulp;
    // such a sweep is undone so the criterion never decreases.
    if (criterion < result.criterion.back()) {
      l = l_before;
      result.rotation = rotation_before;
      break;
    }
    ++result.sweeps;
    const double gain = criterion - result.criterion.back();
    result.criterion.push_back(criterion);
    if (gain < tol) break;
  }
  normalize_signs(l, &result.rotation);
  return result;
}

std::size_t loading_bin(double loading, std::size_t bins) {
  if (bins < 2) throw DomainError("bin count must be >= 2");
  if (std::isnan(loading)) throw DomainError("cannot bin NaN loading");
  const double width = 2.0 / static_cast<double>(bins);
  const double clamped = std::clamp(loading, -1.0, 1.0);
  const auto b = static_cast<std::size_t>(std::floor((clamped + 1.0) / width));
  return std::min(b, bins - 1);
}

JointTable bin_loadings(const LoadingsMatrix& loadings, std::size_t bins) {
  if (loadings.k() != 3) throw ArityError("binning needs exactly 3 factors, got " + std::to_string(loadings.k()));
  const std::size_t m = loadings.loadings.rows();
  if (m == 0) throw DomainError("no variables to bin");
  std::vector<double> counts(bins * bins * bins, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b1 = loading_bin(loadings.loadings(i, 0), bins);
    const std::size_t b2 = loading_bin(loadings.loadings(i, 1), bins);
    const std::size_t b3 = loading_bin(loadings.loadings(i, 2), bins);
    counts[(b1 * bins + b2) * bins + b3] += 1.0;
  }
  std::vector<Axis> axes{Axis::indexed("factor1", bins), Axis::indexed("factor2", bins),
                         Axis::indexed("factor3", bins)};
  return JointTable::from_counts(std::move(axes), counts);
}

DataMatrix drop_constant_columns(const DataMatrix& data, std::vector<std::string>* dropped) {
  data.validate();
  const std::size_t n = data.values.rows();
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < data.values.cols(); ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < n && constant; ++i) constant = data.values(i, j) == data.values(0, j);
    if (constant) {
      if (dropped) dropped->push_back(data.variable_labels[j]);
    } else {
      keep.push_back(j);
    }
  }
  DataMatrix out{data.case_labels, {}, Matrix(n, keep.size()), data.kind};
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.variable_labels.push_back(data.variable_labels[keep[c]]);
    for (std::size_t i = 0; i < n; ++i) out.values(i, c) = data.values(i, keep[c]);
  }
  return out;
}

std::string to_csv(const DataMatrix& data) {
  data.validate();
  std::vector<std::string> header{"case"};
  header.insert(header.end(), data.variable_labels.begin(), data.variable_labels.end());
  std::string out = detail::csv_join(header) + "\n";
  for (std::size_t i = 0; i < data.values.rows(); ++i) {
    std::vector<std::string> row{data.case_labels[i]};
    for (std::size_t j = 0; j < data.values.cols(); ++j) row.push_back(detail::format_roundtrip(data.values(i, j)));
    out += detail::csv_join(row) + "\n";
  }
  return out;
}

DataMatrix data_matrix_from_csv(const std::string& text) {
  const auto rows = detail::csv_parse(text);
  if (rows.empty()) throw ParseError("empty data matrix CSV");
  const auto& header = rows.front();
  if (header.size() < 2) throw ParseError("data matrix CSV needs a case column and variables", 1);
  DataMatrix out;
  out.variable_labels.assign(header.begin() + 1, header.end());
  const std::size_t m = out.variable_labels.size();
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) throw ParseError("wrong number of fields", r + 1);
    out.case_labels.push_back(rows[r][0]);
    for (std::size_t j = 1; j < rows[r].size(); ++j) {
      try {
        values.push_back(detail::parse_double(rows[r][j]));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), r + 1);
      }
    }
  }
  out.values = Matrix(out.case_labels.size(), m, std::move(values));
  out.validate();
  return out;
}

std::string to_csv(const LoadingsMatrix& loadings) {
  std::vector<std::string> header{"variable"};
  for (std::size_t j = 0; j < loadings.k(); ++j) header.push_back("factor" + std::to_string(j + 1));
  std::string out = detail::csv_join(header) + "\n";
  for (std::size_t i = 0; i < loadings.loadings.rows(); ++i) {
    std::vector<std::string> row{loadings.variable_labels[i]};
    for (std::size_t j = 0; j < loadings.k(); ++j) row.push_back(detail::format_roundtrip(loadings.loadings(i, j)));
    out += detail::csv_join(row) + "\n";
  }
  std::vector<std::string> footer{"eigenvalue"};
  for (double e : loadings.eigenvalues) footer.push_back(detail::format_roundtrip(e));
  out += detail::csv_join(footer) + "\n";
  return out;
}

LoadingsMatrix loadings_from_csv(const std::string& text) {
  const auto rows = detail::csv_parse(text);
  if (rows.size() < 2 || rows.back().empty() || rows.back()[0] != "eigenvalue") {
    throw ParseError("loadings CSV needs a header, variable rows and an eigenvalue footer");
  }
  const std::size_t k = rows.front().size() - 1;
  LoadingsMatrix out;
  std::vector<double> values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != k + 1) throw ParseError("wrong number of fields", r + 1);
    std::vector<double> nums;
    for (std::size_t j = 1; j <= k; ++j) nums.push_back(detail::parse_double(rows[r][j]));
    if (r + 1 == rows.size()) {
      out.eigenvalues = std::move(nums);
    } else {
      out.variable_labels.push_back(rows[r][0]);
      values.insert(values.end(), nums.begin(), nums.end());
    }
  }
  out.loadings = Matrix(out.variable_labels.size(), k, std::move(values));
  return out;
}

}  // namespace imprint::factor
