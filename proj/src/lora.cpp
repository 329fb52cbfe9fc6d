#include "narrclass/lora.hpp"

#include <algorithm>
#include <random>

namespace narrclass::lora {
namespace {

void check_matvec(const Matrix& m, std::span<const double> x) {
  if (m.cols() != x.size()) {
    throw DimensionError("matvec: matrix has " + std::to_string(m.cols()) + " columns, vector has " +
                         std::to_string(x.size()) + " entries");
  }
}

void check_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void check_scaled_product(const Matrix& base, const Matrix& b, const Matrix& a) {
  check_matmul(b, a);
  if (base.rows() != b.rows() || base.cols() != a.cols()) {
    throw DimensionError("add_scaled_product: base shape does not match b * a");
  }
}

double dot_row(const Matrix& m, std::size_t r, std::span<const double> x) {
  double s = 0.0;
  auto row = m.row(r);
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x[j];
  return s;
}

double product_entry(const Matrix& a, const Matrix& b, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.cols(); ++t) s += a(i, t) * b(t, j);
  return s;
}

std::vector<double> flat(const nlohmann::json& j, std::size_t n, const char* key) {
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != n) throw DimensionError(std::string(key) + ": expected " + std::to_string(n) + " values");
  return v;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw DimensionError("matrix data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

namespace kernels {

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  check_matvec(m, x);
  std::vector<double> out(m.rows());
  const auto rows = static_cast<long>(m.rows());
#pragma omp parallel for schedule(static) if (rows * static_cast<long>(m.cols()) > 4096)
  for (long i = 0; i < rows; ++i) out[static_cast<std::size_t>(i)] = dot_row(m, static_cast<std::size_t>(i), x);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b);
  Matrix out(a.rows(), b.cols());
  const auto rows = static_cast<long>(a.rows());
#pragma omp parallel for schedule(static) if (rows * static_cast<long>(b.cols()) > 4096)
  for (long i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < b.cols(); ++j) out(r, j) = product_entry(a, b, r, j);
  }
  return out;
}

Matrix add_scaled_product(const Matrix& base, double scale, const Matrix& b, const Matrix& a) {
  check_scaled_product(base, b, a);
  Matrix out = base;
  const auto rows = static_cast<long>(base.rows());
#pragma omp parallel for schedule(static) if (rows * static_cast<long>(base.cols()) > 4096)
  for (long i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < base.cols(); ++j) out(r, j) += scale * product_entry(b, a, r, j);
  }
  return out;
}

}  // namespace kernels

namespace reference {

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  check_matvec(m, x);
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot_row(m, i, x);
  return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  check_matmul(a, b);
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = product_entry(a, b, i, j);
  }
  return out;
}

Matrix add_scaled_product(const Matrix& base, double scale, const Matrix& b, const Matrix& a) {
  check_scaled_product(base, b, a);
  Matrix out = base;
  for (std::size_t i = 0; i < base.rows(); ++i) {
    for (std::size_t j = 0; j < base.cols(); ++j) out(i, j) += scale * product_entry(b, a, i, j);
  }
  return out;
}

}  // namespace reference

LoraLayer::LoraLayer(Matrix base, Matrix a, Matrix b, double alpha)
    : base_(std::move(base)), a_(std::move(a)), b_(std::move(b)), alpha_(alpha) {
  if (!(alpha_ > 0.0)) throw std::invalid_argument("alpha must be positive");
  const std::size_t r = a_.rows();
  if (r == 0) throw DimensionError("rank must be positive");
  if (r > std::min(out_dim(), in_dim())) {
    throw DimensionError("rank " + std::to_string(r) + " exceeds min(d, k)");
  }
  if (a_.cols() != in_dim()) throw DimensionError("A must be r x k");
  if (b_.rows() != out_dim() || b_.cols() != r) throw DimensionError("B must be d x r");
}

LoraLayer LoraLayer::fresh(Matrix base, std::size_t rank, double alpha, std::uint64_t seed,
                           double init_std) {
  const std::size_t d = base.rows();
  const std::size_t k = base.cols();
  Matrix a(rank, k);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, init_std);
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::size_t j = 0; j < k; ++j) a(i, j) = dist(rng);
  }
  return LoraLayer(std::move(base), std::move(a), Matrix(d, rank), alpha);
}

bool LoraLayer::rank_is_low() const { return 2 * rank() <= std::min(out_dim(), in_dim()); }

LoraLayer LoraLayer::with_adapters(Matrix a, Matrix b) const {
  return LoraLayer(base_, std::move(a), std::move(b), alpha_);
}

LoraLayer LoraLayer::with_alpha(double alpha) const { return LoraLayer(base_, a_, b_, alpha); }

std::vector<double> LoraLayer::forward_base(std::span<const double> x) const {
  return kernels::matvec(base_, x);
}

std::vector<double> LoraLayer::forward_lora(std::span<const double> x) const {
  auto h = kernels::matvec(base_, x);
  const auto ax = kernels::matvec(a_, x);
  const auto bax = kernels::matvec(b_, ax);
  const double s = scale();
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += s * bax[i];
  return h;
}

Matrix LoraLayer::merge() const { return kernels::add_scaled_product(base_, scale(), b_, a_); }

nlohmann::json LoraLayer::to_json() const {
  auto vec = [](const Matrix& m) { return std::vector<double>(m.data().begin(), m.data().end()); };
  return {{"d", out_dim()}, {"k", in_dim()}, {"r", rank()}, {"alpha", alpha_},
          {"W0", vec(base_)}, {"A", vec(a_)}, {"B", vec(b_)}};
}

LoraLayer LoraLayer::from_json(const nlohmann::json& doc) {
  const auto d = doc.at("d").get<std::size_t>();
  const auto k = doc.at("k").get<std::size_t>();
  const auto r = doc.at("r").get<std::size_t>();
  return LoraLayer(Matrix(d, k, flat(doc, d * k, "W0")), Matrix(r, k, flat(doc, r * k, "A")),
                   Matrix(d, r, flat(doc, d * r, "B")), doc.at("alpha").get<double>());
}

}  // namespace narrclass::lora
