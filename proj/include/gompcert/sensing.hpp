#pragma once

#include <cstdint>
#include <filesystem>

#include "gompcert/densela.hpp"

namespace gompcert {

// The measurement operator A with its column norms.
class SensingMatrix {
 public:
  SensingMatrix() = default;
  // Wraps `mat` and records its column norms. `normalized` is true when
  // every norm lies within kUnitTolerance of 1.
  explicit SensingMatrix(DenseMatrix mat);

  static constexpr double kUnitTolerance = 1e-10;

  const DenseMatrix& matrix() const noexcept { return mat_; }
  std::size_t rows() const noexcept { return mat_.rows(); }
  std::size_t cols() const noexcept { return mat_.cols(); }
  const Vector& column_norms() const noexcept { return column_norms_; }
  bool normalized() const noexcept { return normalized_; }

 private:
  DenseMatrix mat_;
  Vector column_norms_;
  bool normalized_ = false;
};

// Scales every column to unit l2 norm. Throws ZeroColumn for a column with
// norm below 1e-12.
SensingMatrix normalize_columns(const DenseMatrix& m);

// i.i.d. standard normal entries, then column-normalized. Bit-identical for
// identical arguments.
SensingMatrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed);

// [I_m | d_1 ... d_extra] with d_j = normalize(e_{j mod m} + strength * g_j),
// g_j standard normal: identity columns duplicated and then perturbed.
// strength = 0 gives exact duplicates.
SensingMatrix gen_perturbed_identity(std::size_t m, std::size_t extra, double strength,
                                     std::uint64_t seed);

// normalize(I_m + strength * G), G standard normal and m x m. Small strengths
// give square matrices with small restricted isometry constants at every order.
SensingMatrix gen_jittered_identity(std::size_t m, double strength, std::uint64_t seed);

// The (NK+1) x (NK+1) matrix at which the sharp RIC bound is attained with
// equality. Block layout, with b = sqrt(K(K+N)):
//
//   [ sqrt(K/(K+N)) I_K   0                 1/b (K x N) ]
//   [ 0                   I_{NK+1-N-K}      0           ]
//   [ 0                   0                 I_N         ]
//
// Its Gram matrix is
//
//   [ K/(K+N) I_K         0                 1/(K+N)          ]
//   [ 0                   I                 0                ]
//   [ 1/(K+N)             0                 I_N + 1/(K+N) 11' ]
//
// Columns are not unit norm and are deliberately left that way; rescaling
// would change the spectrum.
SensingMatrix gen_counterexample(std::size_t K, std::size_t N);

// Closed-form Gram spectrum of gen_counterexample(K, N), ascending:
// K/(K+N) with multiplicity K-1, 1 with multiplicity NK-K, and
// 1 -/+ 1/sqrt(K/N + 1).
Vector counterexample_spectrum(std::size_t K, std::size_t N);

// Comma-separated, one row per line, no header, shortest round-trip decimals.
void save_csv(const DenseMatrix& m, const std::filesystem::path& path);
inline void save_csv(const SensingMatrix& s, const std::filesystem::path& path) {
  save_csv(s.matrix(), path);
}
DenseMatrix load_matrix_csv(const std::filesystem::path& path);
SensingMatrix load_csv(const std::filesystem::path& path);

// Vectors are stored as a single column. Loading also accepts a single row.
void save_vector_csv(std::span<const double> v, const std::filesystem::path& path);
Vector load_vector_csv(const std::filesystem::path& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace gompcert
