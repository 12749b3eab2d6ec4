#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "orls/errors.hpp"

namespace orls {

// Dense real vector. Entries are validated finite on construction from
// existing data; element mutation is unchecked.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : entries_(dim, 0.0) {}
  explicit DenseVector(std::vector<double> entries);

  static DenseVector zeros(std::size_t dim) { return DenseVector(dim); }

  [[nodiscard]] std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  double& operator[](std::size_t i) noexcept { return entries_[i]; }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return entries_; }
  [[nodiscard]] std::vector<double>& data() noexcept { return entries_; }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> entries_;
};

double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);

// Symmetric matrix with full square storage. Symmetry is maintained by
// mirrored writes, never by trusting arithmetic.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t order) : order_(order), storage_(order * order, 0.0) {}

  static SymmetricMatrix zeros(std::size_t order) { return SymmetricMatrix(order); }
  static SymmetricMatrix identity(std::size_t order);
  static SymmetricMatrix scaled_identity(std::size_t order, double value);

  [[nodiscard]] std::size_t order() const noexcept { return order_; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept {
    return storage_[i * order_ + j];
  }
  // Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) noexcept {
    storage_[i * order_ + j] = value;
    storage_[j * order_ + i] = value;
  }

  // out = M * x
  void apply(const DenseVector& x, DenseVector& out) const;
  [[nodiscard]] DenseVector apply(const DenseVector& x) const;

  [[nodiscard]] std::span<const double> storage() const noexcept { return storage_; }

  bool operator==(const SymmetricMatrix&) const = default;

 private:
  std::size_t order_ = 0;
  std::vector<double> storage_;  // row-major
};

// Strictly positive diagonal, validated on construction.
class DiagonalWeights {
 public:
  DiagonalWeights() = default;
  explicit DiagonalWeights(std::vector<double> diag);

  [[nodiscard]] std::size_t order() const noexcept { return diag_.size(); }
  double operator[](std::size_t i) const noexcept { return diag_[i]; }
  [[nodiscard]] std::span<const double> diag() const noexcept { return diag_; }

 private:
  std::vector<double> diag_;
};

struct CgReport {
  DenseVector solution;
  std::size_t iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
};

// Absolute floor in the CG residual test eps * max(|b|, kCgNormFloor), so a
// zero right-hand side does not turn the tolerance into zero.
inline constexpr double kCgNormFloor = 1e-30;

// Q + a * a^T
SymmetricMatrix rank1_update(const SymmetricMatrix& q, const DenseVector& a);
void rank1_update_in_place(SymmetricMatrix& q, const DenseVector& a);

using LinearOperator = std::function<void(const DenseVector& in, DenseVector& out)>;

// Conjugate gradient for an SPD operator, warm-started at x0. Converges when
// |A x - b| <= eps * max(|b|, kCgNormFloor); reports 0 iterations when x0
// already satisfies the test. A non-converged solve returns the last iterate
// with converged = false; non-finite values abort with NumericalError.
CgReport cg_solve(const LinearOperator& apply_a, const DenseVector& b, const DenseVector& x0,
                  double eps, std::size_t max_iter);

// (A + u v^T)^{-1} from A^{-1} via the Sherman-Morrison formula. Output is
// exactly symmetric when u == v; a near-zero denominator raises
// NumericalError.
SymmetricMatrix sherman_morrison_update(const SymmetricMatrix& a_inv, const DenseVector& u,
                                        const DenseVector& v);

// Dense Cholesky solve; raises NumericalError if a pivot is not positive.
DenseVector direct_solve(const SymmetricMatrix& a, const DenseVector& b);

}  // namespace orls
