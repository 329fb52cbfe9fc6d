#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace narrclass::lora {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// OpenMP kernels. Rows are split across threads; each row is summed in index
// order, so results match the serial reference exactly.
namespace kernels {
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
// base + scale * (b * a)
Matrix add_scaled_product(const Matrix& base, double scale, const Matrix& b, const Matrix& a);
}  // namespace kernels

namespace reference {
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix add_scaled_product(const Matrix& base, double scale, const Matrix& b, const Matrix& a);
}  // namespace reference

// Frozen base weight W0 (d x k) plus a low-rank update B (d x r) * A (r x k)
// scaled by alpha / r.
class LoraLayer {
 public:
  LoraLayer(Matrix base, Matrix a, Matrix b, double alpha);

  // B = 0, A ~ N(0, init_std^2) from `seed`.
  static LoraLayer fresh(Matrix base, std::size_t rank, double alpha, std::uint64_t seed,
                         double init_std = 0.02);

  std::size_t out_dim() const { return base_.rows(); }
  std::size_t in_dim() const { return base_.cols(); }
  std::size_t rank() const { return a_.rows(); }
  double alpha() const { return alpha_; }
  double scale() const { return alpha_ / static_cast<double>(rank()); }

  const Matrix& base() const { return base_; }
  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }

  // False when 2r > min(d, k): legal, but hardly a low-rank update.
  bool rank_is_low() const;
  std::size_t trainable_parameter_count() const { return rank() * (out_dim() + in_dim()); }

  // Copies sharing W0 with replaced adapters or alpha.
  LoraLayer with_adapters(Matrix a, Matrix b) const;
  LoraLayer with_alpha(double alpha) const;

  std::vector<double> forward_base(std::span<const double> x) const;
  std::vector<double> forward_lora(std::span<const double> x) const;
  Matrix merge() const;

  // {"d", "k", "r", "alpha", "W0", "A", "B"} with flat row-major arrays.
  nlohmann::json to_json() const;
  static LoraLayer from_json(const nlohmann::json& doc);

 private:
  Matrix base_;
  Matrix a_;
  Matrix b_;
  double alpha_;
};

}  // namespace narrclass::lora
