#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "orls/linalg.hpp"

namespace orls {

struct OrlsParams {
  double lambda = 1.0;       // l1 regularization weight
  double delta = 1e-6;       // weight stabilizer in 1/(|x| + delta)
  double cg_eps = 1e-5;      // relative CG residual tolerance
  std::size_t cg_max_iter = 0;  // 0 means 4 * dim, resolved at solve time
  bool cg_warm_start = true;    // initialize CG at the previous estimate

  void validate() const;
  [[nodiscard]] std::size_t resolved_cg_max_iter(std::size_t dim) const {
    return cg_max_iter == 0 ? 4 * dim : cg_max_iter;
  }
};

// One sequentially arriving measurement: y = a^T x* + noise.
struct MeasurementEvent {
  DenseVector a;      // sensing vector in coefficient space
  double y = 0.0;     // measured value
  std::uint64_t t = 0;  // arrival index (1-based)
};

// Recursive per-signal solver state. gram accumulates sum a_j a_j^T, rhs
// accumulates sum y_j a_j, estimate is the current solution, and weights
// were built from the estimate preceding the last solve.
struct OrlsState {
  std::size_t t = 0;  // measurements absorbed
  SymmetricMatrix gram;
  DenseVector rhs;
  DenseVector estimate;
  DiagonalWeights weights;
  std::vector<std::uint32_t> cg_iterations_history;
  bool last_cg_converged = true;

  [[nodiscard]] std::size_t dim() const noexcept { return rhs.dim(); }
};

// W(j) = 1 / (|x(j)| + delta); every entry lands in (0, 1/delta].
DiagonalWeights weight_update(const DenseVector& x, double delta);

OrlsState orls_init(std::size_t dim, const OrlsParams& params);

// Absorbs one measurement: refreshes weights from the previous estimate,
// updates gram and rhs, then solves (lambda W + gram) x = rhs by CG
// initialized at the previous estimate. A non-converged CG keeps the best
// iterate and flags last_cg_converged; it is degradation, not failure.
OrlsState orls_step(OrlsState state, const MeasurementEvent& event, const OrlsParams& params);

// Exact solution of (lambda W + gram) x = rhs by dense factorization; the
// oracle for the CG path.
DenseVector closed_form_solve(const SymmetricMatrix& gram, const DenseVector& rhs,
                              const DiagonalWeights& weights, double lambda);

using StepObserver = std::function<void(const OrlsState&)>;

struct OrlsRunResult {
  OrlsState state;
  std::vector<DenseVector> estimates;  // empty when keep_estimates is false
};

// Folds orls_step over the events in arrival order. Pass an observer (and
// keep_estimates = false) to stream intermediate estimates instead of
// storing all of them.
OrlsRunResult orls_run(std::span<const MeasurementEvent> events, std::size_t dim,
                       const OrlsParams& params, const StepObserver& on_step = {},
                       bool keep_estimates = true);

// Batch baseline: alternates the full-data weighted solve with
// weight_update, starting from x = 0, for up to n_outer rounds with an
// early exit once the iterates stop moving.
DenseVector irls_batch(std::span<const DenseVector> rows, const DenseVector& y, std::size_t dim,
                       const OrlsParams& params, std::size_t n_outer);

// sum_j (y_j - a_j^T x)^2 + lambda |x|_1
double l1_objective(std::span<const DenseVector> rows, const DenseVector& y,
                    const DenseVector& x, double lambda);

}  // namespace orls
