#include "orls/solvers.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace orls {

namespace {

constexpr double kIrlsExitTol = 1e-8;

// lambda W + Q, materialized for the dense factorization path.
SymmetricMatrix weighted_system(const SymmetricMatrix& gram, const DiagonalWeights& weights,
                                double lambda) {
  SymmetricMatrix a = gram;
  for (std::size_t i = 0; i < a.order(); ++i) {
    a.set(i, i, a.at(i, i) + lambda * weights[i]);
  }
  return a;
}

}  // namespace

void OrlsParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw NumericalError("OrlsParams: lambda must be positive and finite");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw NumericalError("OrlsParams: delta must be positive and finite");
  }
  if (!(cg_eps > 0.0) || !std::isfinite(cg_eps)) {
    throw NumericalError("OrlsParams: cg_eps must be positive and finite");
  }
}

DiagonalWeights weight_update(const DenseVector& x, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw NumericalError("weight_update: delta must be positive and finite");
  }
  std::vector<double> diag(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) {
    if (!std::isfinite(x[j])) throw NumericalError("weight_update: non-finite estimate entry");
    diag[j] = 1.0 / (std::abs(x[j]) + delta);
  }
  return DiagonalWeights(std::move(diag));
}

OrlsState orls_init(std::size_t dim, const OrlsParams& params) {
  params.validate();
  OrlsState state;
  state.t = 0;
  state.gram = SymmetricMatrix::zeros(dim);
  state.rhs = DenseVector(dim);
  state.estimate = DenseVector(dim);
  state.weights = weight_update(state.estimate, params.delta);
  return state;
}

OrlsState orls_step(OrlsState state, const MeasurementEvent& event, const OrlsParams& params) {
  const std::size_t n = state.dim();
  if (event.a.dim() != n) {
    throw DimensionError("orls_step: event dimension " + std::to_string(event.a.dim()) +
                         " does not match state dimension " + std::to_string(n));
  }
  if (!std::isfinite(event.y)) throw NumericalError("orls_step: non-finite measurement");

  // Weights come from the previous estimate, before the solve.
  state.weights = weight_update(state.estimate, params.delta);
  rank1_update_in_place(state.gram, event.a);
  axpy(event.y, event.a, state.rhs);
  state.t += 1;

  const double lambda = params.lambda;
  const SymmetricMatrix& gram = state.gram;
  const DiagonalWeights& weights = state.weights;
  const LinearOperator apply_a = [&gram, &weights, lambda](const DenseVector& in,
                                                           DenseVector& out) {
    gram.apply(in, out);
    for (std::size_t i = 0; i < in.dim(); ++i) out[i] += lambda * weights[i] * in[i];
  };

  const DenseVector x0 = params.cg_warm_start ? state.estimate : DenseVector(n);
  CgReport report =
      cg_solve(apply_a, state.rhs, x0, params.cg_eps, params.resolved_cg_max_iter(n));
  state.estimate = std::move(report.solution);
  state.cg_iterations_history.push_back(static_cast<std::uint32_t>(report.iterations));
  state.last_cg_converged = report.converged;
  return state;
}

DenseVector closed_form_solve(const SymmetricMatrix& gram, const DenseVector& rhs,
                              const DiagonalWeights& weights, double lambda) {
  if (gram.order() != rhs.dim() || weights.order() != rhs.dim()) {
    throw DimensionError("closed_form_solve: dimension mismatch");
  }
  return direct_solve(weighted_system(gram, weights, lambda), rhs);
}

OrlsRunResult orls_run(std::span<const MeasurementEvent> events, std::size_t dim,
                       const OrlsParams& params, const StepObserver& on_step,
                       bool keep_estimates) {
  OrlsRunResult result;
  result.state = orls_init(dim, params);
  if (keep_estimates) result.estimates.reserve(events.size());
  for (const MeasurementEvent& event : events) {
    result.state = orls_step(std::move(result.state), event, params);
    if (on_step) on_step(result.state);
    if (keep_estimates) result.estimates.push_back(result.state.estimate);
  }
  return result;
}

DenseVector irls_batch(std::span<const DenseVector> rows, const DenseVector& y, std::size_t dim,
                       const OrlsParams& params, std::size_t n_outer) {
  params.validate();
  if (n_outer < 1) throw NumericalError("irls_batch: n_outer must be at least 1");
  if (rows.size() != y.dim()) {
    throw DimensionError("irls_batch: row count does not match measurement count");
  }

  SymmetricMatrix gram = SymmetricMatrix::zeros(dim);
  DenseVector rhs(dim);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].dim() != dim) throw DimensionError("irls_batch: row dimension mismatch");
    rank1_update_in_place(gram, rows[j]);
    axpy(y[j], rows[j], rhs);
  }

  DenseVector x(dim);
  for (std::size_t outer = 0; outer < n_outer; ++outer) {
    const DiagonalWeights weights = weight_update(x, params.delta);
    DenseVector x_next = closed_form_solve(gram, rhs, weights, params.lambda);
    DenseVector diff = x_next;
    axpy(-1.0, x, diff);
    const bool settled = norm2(diff) <= kIrlsExitTol * (1.0 + norm2(x));
    x = std::move(x_next);
    if (settled) break;
  }
  return x;
}

double l1_objective(std::span<const DenseVector> rows, const DenseVector& y,
                    const DenseVector& x, double lambda) {
  if (rows.size() != y.dim()) {
    throw DimensionError("l1_objective: row count does not match measurement count");
  }
  double data = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const double r = y[j] - dot(rows[j], x);
    data += r * r;
  }
  double l1 = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) l1 += std::abs(x[i]);
  return data + lambda * l1;
}

}  // namespace orls
