#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gompcert {

using Vector = std::vector<double>;

// Column indices, zero-based. Kept sorted and duplicate-free wherever a
// function documents it as a set.
using IndexSet = std::vector<std::size_t>;

// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  // Zero-filled rows x cols matrix. Both dimensions must be >= 1.
  DenseMatrix(std::size_t rows, std::size_t cols);
  // Takes ownership of row-major `entries`; throws on size mismatch or
  // non-finite values.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);
  static DenseMatrix from_column(std::span<const double> column);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept {
    return entries_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }

  std::span<const double> entries() const noexcept { return entries_; }

  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);
  DenseMatrix select_columns(std::span<const std::size_t> columns) const;
  DenseMatrix transpose() const;

  // M * v and M' * v.
  Vector apply(std::span<const double> v) const;
  Vector apply_transpose(std::span<const double> v) const;

  double max_abs() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

// Householder QR of a tall or square matrix, kept in compact form so the
// same factorization serves both the coefficient solve and the projection.
class HouseholderQR {
 public:
  // Throws RankDeficient when cols > rows or when |R[j][j]| falls below
  // kRankTolerance times the largest column norm.
  explicit HouseholderQR(const DenseMatrix& m);

  static constexpr double kRankTolerance = 1e-12;

  // argmin_u ||y - M u||_2
  Vector solve(std::span<const double> y) const;
  // y - P y, where P projects onto the column span of M.
  Vector residual(std::span<const double> y) const;

 private:
  Vector apply_qt(std::span<const double> y) const;

  std::size_t rows_;
  std::size_t cols_;
  DenseMatrix qr_;       // R above the diagonal, reflectors below
  Vector tau_;           // reflector scales
  Vector r_diag_;
};

// G = M'M. The upper triangle is computed and mirrored, so G is exactly
// symmetric.
DenseMatrix gram(const DenseMatrix& m);

Vector least_squares(const DenseMatrix& m, std::span<const double> y);

// P^perp v for the column span of m.
Vector residual_after_projection(const DenseMatrix& m, std::span<const double> v);

struct JacobiOptions {
  double symmetry_tolerance = 1e-12;  // relative to max |G|
  double off_tolerance = 1e-12;       // relative to initial Frobenius norm
  int max_sweeps = 100;
};

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector symmetric_eigenvalues(const DenseMatrix& g, const JacobiOptions& options = {});

}  // namespace gompcert
