#include "gompcert/sensing.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "gompcert/errors.hpp"
#include "gompcert/random.hpp"

namespace gompcert {

SensingMatrix::SensingMatrix(DenseMatrix mat) : mat_(std::move(mat)) {
  if (mat_.empty()) throw InvalidArgument("sensing matrix must be at least 1x1");
  column_norms_.resize(mat_.cols());
  normalized_ = true;
  for (std::size_t c = 0; c < mat_.cols(); ++c) {
    column_norms_[c] = norm2(mat_.column(c));
    if (std::abs(column_norms_[c] - 1.0) > kUnitTolerance) normalized_ = false;
  }
}

SensingMatrix normalize_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Vector col = m.column(c);
    const double norm = norm2(col);
    if (norm < 1e-12) throw ZeroColumn(c);
    for (double& v : col) v /= norm;
    out.set_column(c, col);
  }
  return SensingMatrix(std::move(out));
}

SensingMatrix gen_gaussian(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw InvalidArgument("gen_gaussian: m and n must be >= 1");
  Rng rng(seed);
  DenseMatrix raw(m, n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) raw(r, c) = rng.normal();
  return normalize_columns(raw);
}

SensingMatrix gen_perturbed_identity(std::size_t m, std::size_t extra, double strength,
                                     std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("gen_perturbed_identity: m must be >= 1");
  if (!(strength >= 0.0)) throw InvalidArgument("perturbation strength must be >= 0");
  Rng rng(seed);
  DenseMatrix raw(m, m + extra);
  for (std::size_t i = 0; i < m; ++i) raw(i, i) = 1.0;
  for (std::size_t j = 0; j < extra; ++j) {
    for (std::size_t r = 0; r < m; ++r) raw(r, m + j) = strength * rng.normal();
    raw(j % m, m + j) += 1.0;
  }
  return normalize_columns(raw);
}

SensingMatrix gen_jittered_identity(std::size_t m, double strength, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("gen_jittered_identity: m must be >= 1");
  if (!(strength >= 0.0)) throw InvalidArgument("perturbation strength must be >= 0");
  Rng rng(seed);
  DenseMatrix raw = DenseMatrix::identity(m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) raw(r, c) += strength * rng.normal();
  return normalize_columns(raw);
}

SensingMatrix gen_counterexample(std::size_t K, std::size_t N) {
  if (K == 0 || N == 0) throw InvalidArgument("gen_counterexample: K and N must be >= 1");
  const std::size_t size = N * K + 1;
  const double kd = static_cast<double>(K);
  const double nd = static_cast<double>(N);
  const double diag = std::sqrt(kd / (kd + nd));
  const double corner = 1.0 / std::sqrt(kd * (kd + nd));

  DenseMatrix a(size, size);
  for (std::size_t i = 0; i < K; ++i) {
    a(i, i) = diag;
    for (std::size_t j = size - N; j < size; ++j) a(i, j) = corner;
  }
  // Middle identity block (size (N-1)(K-1)) and bottom-right I_N.
  for (std::size_t i = K; i < size; ++i) a(i, i) = 1.0;
  return SensingMatrix(std::move(a));
}

Vector counterexample_spectrum(std::size_t K, std::size_t N) {
  if (K == 0 || N == 0) throw InvalidArgument("counterexample_spectrum: K and N must be >= 1");
  const double kd = static_cast<double>(K);
  const double nd = static_cast<double>(N);
  const double split = 1.0 / std::sqrt(kd / nd + 1.0);
  Vector eig;
  eig.insert(eig.end(), K - 1, kd / (kd + nd));
  eig.insert(eig.end(), N * K - K, 1.0);
  eig.push_back(1.0 - split);
  eig.push_back(1.0 + split);
  std::sort(eig.begin(), eig.end());
  return eig;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void save_csv(const DenseMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw InvalidArgument("write to '" + path.string() + "' failed");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;
};

Grid read_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  Grid grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    std::size_t fields = 0;
    std::size_t col_no = 1;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = trim(rest.substr(0, comma));
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(line_no, col_no,
                         "not a number: '" + std::string(field) + "'");
      }
      if (!std::isfinite(value)) throw ParseError(line_no, col_no, "non-finite value");
      grid.entries.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      col_no += comma + 1;
      rest = rest.substr(comma + 1);
    }
    if (grid.rows == 0) {
      grid.cols = fields;
    } else if (fields != grid.cols) {
      throw DimensionMismatch("line " + std::to_string(line_no) + " has " +
                              std::to_string(fields) + " fields, expected " +
                              std::to_string(grid.cols));
    }
    ++grid.rows;
  }
  if (grid.rows == 0) throw ParseError(1, 1, "file contains no data");
  return grid;
}

}  // namespace

DenseMatrix load_matrix_csv(const std::filesystem::path& path) {
  Grid g = read_grid(path);
  return DenseMatrix(g.rows, g.cols, std::move(g.entries));
}

SensingMatrix load_csv(const std::filesystem::path& path) {
  return SensingMatrix(load_matrix_csv(path));
}

void save_vector_csv(std::span<const double> v, const std::filesystem::path& path) {
  save_csv(DenseMatrix::from_column(v), path);
}

Vector load_vector_csv(const std::filesystem::path& path) {
  Grid g = read_grid(path);
  if (g.rows != 1 && g.cols != 1) {
    throw DimensionMismatch("vector file must hold a single row or column, got " +
                            std::to_string(g.rows) + "x" + std::to_string(g.cols));
  }
  return std::move(g.entries);
}

}  // namespace gompcert
