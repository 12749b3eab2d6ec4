#include "orls/linalg.hpp"

#include <cmath>
#include <string>

namespace orls {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

DenseVector::DenseVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (!all_finite(entries_)) {
    throw NumericalError("DenseVector: non-finite entry");
  }
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_dim(a.dim(), b.dim(), "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  require_same_dim(x.dim(), y.dim(), "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t order) {
  return scaled_identity(order, 1.0);
}

SymmetricMatrix SymmetricMatrix::scaled_identity(std::size_t order, double value) {
  SymmetricMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.set(i, i, value);
  return m;
}

void SymmetricMatrix::apply(const DenseVector& x, DenseVector& out) const {
  require_same_dim(x.dim(), order_, "SymmetricMatrix::apply");
  require_same_dim(out.dim(), order_, "SymmetricMatrix::apply");
  for (std::size_t i = 0; i < order_; ++i) {
    const double* row = storage_.data() + i * order_;
    double acc = 0.0;
    for (std::size_t j = 0; j < order_; ++j) acc += row[j] * x[j];
    out[i] = acc;
  }
}

DenseVector SymmetricMatrix::apply(const DenseVector& x) const {
  DenseVector out(order_);
  apply(x, out);
  return out;
}

DiagonalWeights::DiagonalWeights(std::vector<double> diag) : diag_(std::move(diag)) {
  for (double v : diag_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw NumericalError("DiagonalWeights: entries must be strictly positive and finite");
    }
  }
}

SymmetricMatrix rank1_update(const SymmetricMatrix& q, const DenseVector& a) {
  SymmetricMatrix result = q;
  rank1_update_in_place(result, a);
  return result;
}

void rank1_update_in_place(SymmetricMatrix& q, const DenseVector& a) {
  require_same_dim(q.order(), a.dim(), "rank1_update");
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      q.set(i, j, q.at(i, j) + a[i] * a[j]);
    }
  }
}

CgReport cg_solve(const LinearOperator& apply_a, const DenseVector& b, const DenseVector& x0,
                  double eps, std::size_t max_iter) {
  require_same_dim(b.dim(), x0.dim(), "cg_solve");
  const std::size_t n = b.dim();
  const double tol = eps * std::max(norm2(b), kCgNormFloor);

  CgReport report;
  report.solution = x0;
  DenseVector& x = report.solution;

  DenseVector r(n);
  apply_a(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

  double rho = dot(r, r);
  if (!std::isfinite(rho)) throw NumericalError("cg_solve: non-finite residual");
  if (std::sqrt(rho) <= tol) {
    report.final_residual_norm = std::sqrt(rho);
    report.converged = true;
    return report;
  }

  DenseVector p = r;
  DenseVector ap(n);
  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    apply_a(p, ap);
    const double p_ap = dot(p, ap);
    if (!std::isfinite(p_ap) || p_ap <= 0.0) {
      throw NumericalError("cg_solve: operator is not positive definite");
    }
    const double alpha = rho / p_ap;
    axpy(alpha, p, x);
    axpy(-alpha, ap, r);
    const double rho_next = dot(r, r);
    if (!std::isfinite(rho_next)) throw NumericalError("cg_solve: non-finite residual");
    report.iterations = iter;
    if (std::sqrt(rho_next) <= tol) {
      report.final_residual_norm = std::sqrt(rho_next);
      report.converged = true;
      return report;
    }
    const double beta = rho_next / rho;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rho = rho_next;
  }

  report.final_residual_norm = std::sqrt(rho);
  report.converged = false;
  return report;
}

SymmetricMatrix sherman_morrison_update(const SymmetricMatrix& a_inv, const DenseVector& u,
                                        const DenseVector& v) {
  require_same_dim(a_inv.order(), u.dim(), "sherman_morrison_update");
  require_same_dim(a_inv.order(), v.dim(), "sherman_morrison_update");

  const DenseVector s = a_inv.apply(u);   // A^{-1} u
  const DenseVector w = a_inv.apply(v);   // A^{-1} v (== s when u == v)
  const double vs = dot(v, s);
  const double denom = 1.0 + vs;
  if (std::abs(denom) < 1e-12 * (1.0 + std::abs(vs))) {
    throw NumericalError("sherman_morrison_update: singular rank-1 update");
  }

  SymmetricMatrix result(a_inv.order());
  for (std::size_t i = 0; i < a_inv.order(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      result.set(i, j, a_inv.at(i, j) - s[i] * w[j] / denom);
    }
  }
  return result;
}

DenseVector direct_solve(const SymmetricMatrix& a, const DenseVector& b) {
  require_same_dim(a.order(), b.dim(), "direct_solve");
  const std::size_t n = a.order();

  // Lower Cholesky factor, packed row-major.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) acc -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (!(acc > 0.0) || !std::isfinite(acc)) {
          throw NumericalError("direct_solve: matrix is not positive definite");
        }
        l[i * n + i] = std::sqrt(acc);
      } else {
        l[i * n + j] = acc / l[j * n + j];
      }
    }
  }

  // Forward then backward substitution.
  DenseVector x = b;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = x[i];
    for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * x[k];
    x[i] = acc / l[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * x[k];
    x[ii] = acc / l[ii * n + ii];
  }
  return x;
}

}  // namespace orls
