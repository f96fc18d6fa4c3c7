#include "gompcert/densela.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gompcert/errors.hpp"

namespace gompcert {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("matrix dimensions must be at least 1x1");
  }
  entries_.assign(rows * cols, 0.0);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("matrix dimensions must be at least 1x1");
  }
  if (entries_.size() != rows * cols) {
    throw DimensionMismatch("expected " + std::to_string(rows * cols) +
                            " entries, got " + std::to_string(entries_.size()));
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw InvalidArgument("matrix entry is not finite");
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0) {
    throw InvalidArgument("matrix dimensions must be at least 1x1");
  }
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionMismatch("ragged initializer rows");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::from_column(std::span<const double> column) {
  return DenseMatrix(column.size(), 1, Vector(column.begin(), column.end()));
}

Vector DenseMatrix::column(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void DenseMatrix::set_column(std::size_t c, std::span<const double> values) {
  if (values.size() != rows_) throw DimensionMismatch("column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

DenseMatrix DenseMatrix::select_columns(std::span<const std::size_t> columns) const {
  if (columns.empty()) throw InvalidArgument("empty column selection");
  DenseMatrix out(rows_, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= cols_) throw InvalidArgument("column index out of range");
    for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, columns[j]);
  }
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Vector DenseMatrix::apply(std::span<const double> v) const {
  if (v.size() != cols_) throw DimensionMismatch("apply: vector length mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

Vector DenseMatrix::apply_transpose(std::span<const double> v) const {
  if (v.size() != rows_) {
    throw DimensionMismatch("apply_transpose: vector length mismatch");
  }
  Vector out(cols_, 0.0);
  for (std::size_t c = 0; c < cols_; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) acc += (*this)(r, c) * v[r];
    out[c] = acc;
  }
  return out;
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> v) {
  // Scaled accumulation, as in LAPACK dnrm2.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

// ---- Householder QR ------------------------------------------------------

HouseholderQR::HouseholderQR(const DenseMatrix& m)
    : rows_(m.rows()), cols_(m.cols()), qr_(m), tau_(m.cols(), 0.0),
      r_diag_(m.cols(), 0.0) {
  if (cols_ > rows_) {
    throw RankDeficient("more columns (" + std::to_string(cols_) +
                        ") than rows (" + std::to_string(rows_) + ")");
  }
  double max_col_norm = 0.0;
  for (std::size_t c = 0; c < cols_; ++c) {
    max_col_norm = std::max(max_col_norm, norm2(m.column(c)));
  }
  const double threshold = kRankTolerance * max_col_norm;

  Vector x;
  for (std::size_t j = 0; j < cols_; ++j) {
    x.assign(rows_ - j, 0.0);
    for (std::size_t r = j; r < rows_; ++r) x[r - j] = qr_(r, j);
    const double xnorm = norm2(x);
    if (xnorm <= threshold || xnorm == 0.0) {
      throw RankDeficient("column " + std::to_string(j) +
                          " is numerically dependent on its predecessors");
    }
    const double x0 = x[0];
    const double beta = x0 >= 0.0 ? -xnorm : xnorm;
    const double denom = x0 - beta;
    tau_[j] = (beta - x0) / beta;
    r_diag_[j] = beta;
    // v = x / (x0 - beta), v[0] = 1, stored below the diagonal.
    for (std::size_t r = j + 1; r < rows_; ++r) qr_(r, j) /= denom;
    qr_(j, j) = beta;

    for (std::size_t c = j + 1; c < cols_; ++c) {
      double w = qr_(j, c);
      for (std::size_t r = j + 1; r < rows_; ++r) w += qr_(r, j) * qr_(r, c);
      w *= tau_[j];
      qr_(j, c) -= w;
      for (std::size_t r = j + 1; r < rows_; ++r) qr_(r, c) -= w * qr_(r, j);
    }
  }
}

Vector HouseholderQR::apply_qt(std::span<const double> y) const {
  if (y.size() != rows_) throw DimensionMismatch("least squares: rhs length mismatch");
  Vector z(y.begin(), y.end());
  for (std::size_t j = 0; j < cols_; ++j) {
    double w = z[j];
    for (std::size_t r = j + 1; r < rows_; ++r) w += qr_(r, j) * z[r];
    w *= tau_[j];
    z[j] -= w;
    for (std::size_t r = j + 1; r < rows_; ++r) z[r] -= w * qr_(r, j);
  }
  return z;
}

Vector HouseholderQR::solve(std::span<const double> y) const {
  Vector z = apply_qt(y);
  Vector u(cols_, 0.0);
  for (std::size_t jj = cols_; jj-- > 0;) {
    double acc = z[jj];
    for (std::size_t c = jj + 1; c < cols_; ++c) acc -= qr_(jj, c) * u[c];
    u[jj] = acc / r_diag_[jj];
  }
  return u;
}

Vector HouseholderQR::residual(std::span<const double> y) const {
  Vector z = apply_qt(y);
  std::fill(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(cols_), 0.0);
  for (std::size_t jj = cols_; jj-- > 0;) {
    double w = z[jj];
    for (std::size_t r = jj + 1; r < rows_; ++r) w += qr_(r, jj) * z[r];
    w *= tau_[jj];
    z[jj] -= w;
    for (std::size_t r = jj + 1; r < rows_; ++r) z[r] -= w * qr_(r, jj);
  }
  return z;
}

// ---- free functions --------------------------------------------------------

DenseMatrix gram(const DenseMatrix& m) {
  const std::size_t n = m.cols();
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) acc += m(r, i) * m(r, j);
      g(i, j) = acc;
      g(j, i) = acc;
    }
  }
  return g;
}

Vector least_squares(const DenseMatrix& m, std::span<const double> y) {
  return HouseholderQR(m).solve(y);
}

Vector residual_after_projection(const DenseMatrix& m, std::span<const double> v) {
  return HouseholderQR(m).residual(v);
}

Vector symmetric_eigenvalues(const DenseMatrix& g, const JacobiOptions& options) {
  if (g.rows() != g.cols()) throw NotSymmetric(0.0);
  const std::size_t n = g.rows();

  const double scale = g.max_abs();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      asym = std::max(asym, std::abs(g(i, j) - g(j, i)));
  if (asym > options.symmetry_tolerance * scale) throw NotSymmetric(asym);

  DenseMatrix a = g;
  // Work on the symmetrized matrix so rotations see an exact mirror.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = s;
      a(j, i) = s;
    }

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  double frob = 0.0;
  for (double v : a.entries()) frob += v * v;
  frob = std::sqrt(frob);
  const double target = options.off_tolerance * frob;

  int sweep = 0;
  while (off_norm() > target) {
    if (sweep == options.max_sweeps) throw NoConvergence(sweep);
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          a(r, p) = new_rp;
          a(p, r) = new_rp;
          a(r, q) = new_rq;
          a(q, r) = new_rq;
        }
      }
    }
  }

  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace gompcert
