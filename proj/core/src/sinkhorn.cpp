#include <cmath>
#include <limits>

#include "sfmreg/matching.hpp"

namespace sfmreg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

TransportPlan sinkhorn(const Eigen::MatrixXd& cost,
                       const std::vector<bool>& row_mask,
                       const std::vector<bool>& col_mask,
                       const SinkhornParams& params) {
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  if (params.iterations < 1 || params.temperature <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "bad sinkhorn parameters");
  }
  if (!row_mask.empty() && static_cast<Eigen::Index>(row_mask.size()) != rows) {
    throw Error(ErrorCode::kInvalidArgument, "row mask size mismatch");
  }
  if (!col_mask.empty() && static_cast<Eigen::Index>(col_mask.size()) != cols) {
    throw Error(ErrorCode::kInvalidArgument, "col mask size mismatch");
  }

  auto row_ok = [&](Eigen::Index i) { return row_mask.empty() || !row_mask[i]; };
  auto col_ok = [&](Eigen::Index j) { return col_mask.empty() || !col_mask[j]; };

  Eigen::Index active_rows = 0, active_cols = 0;
  for (Eigen::Index i = 0; i < rows; ++i) active_rows += row_ok(i);
  for (Eigen::Index j = 0; j < cols; ++j) active_cols += col_ok(j);

  // Augmented score matrix: interior = -cost/T, slack row/col = slack
  // score, masked = -inf (zero mass).
  Eigen::MatrixXd scores(rows + 1, cols + 1);
  scores.setConstant(kNegInf);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!row_ok(i)) continue;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!col_ok(j)) continue;
      if (!std::isfinite(cost(i, j))) {
        throw Error(ErrorCode::kNonFiniteCost,
                    "cost(" + std::to_string(i) + "," + std::to_string(j) +
                        ") is not finite");
      }
      scores(i, j) = -cost(i, j) / params.temperature;
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (row_ok(i)) scores(i, cols) = params.slack_score;
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (col_ok(j)) scores(rows, j) = params.slack_score;
  }
  scores(rows, cols) = params.slack_score;
  const Eigen::MatrixXd scores_t = scores.transpose();

  // Target marginals in the log domain: unmasked interior rows/cols carry
  // mass 1; the slack row absorbs up to the active column count and vice
  // versa (the usual augmented-OT normalization).
  Eigen::VectorXd log_a = Eigen::VectorXd::Constant(rows + 1, kNegInf);
  Eigen::VectorXd log_b = Eigen::VectorXd::Constant(cols + 1, kNegInf);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (row_ok(i)) log_a[i] = 0.0;
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (col_ok(j)) log_b[j] = 0.0;
  }
  log_a[rows] = active_cols > 0 ? std::log(static_cast<double>(active_cols))
                                : kNegInf;
  log_b[cols] = active_rows > 0 ? std::log(static_cast<double>(active_rows))
                                : kNegInf;

  Eigen::VectorXd f(rows + 1), g(cols + 1);
  for (Eigen::Index i = 0; i <= rows; ++i) {
    f[i] = log_a[i] == kNegInf ? kNegInf : 0.0;
  }
  for (Eigen::Index j = 0; j <= cols; ++j) {
    g[j] = log_b[j] == kNegInf ? kNegInf : 0.0;
  }

  // log-sum-exp over each column of `m` shifted by `shift`: two lazy
  // reduction passes per contiguous column, no temporaries. Columns with
  // no finite entry yield -inf.
  auto colwise_lse = [](const Eigen::MatrixXd& m, const Eigen::VectorXd& shift,
                        Eigen::VectorXd& out) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto terms = m.col(j) + shift;
      const double mx = terms.maxCoeff();
      out[j] = mx == kNegInf
                   ? kNegInf
                   : mx + std::log((terms.array() - mx).exp().sum());
    }
  };

  Eigen::VectorXd row_lse(rows + 1), col_lse(cols + 1);
  TransportPlan result;
  for (int it = 0; it < params.iterations; ++it) {
    // Row log-sum-exp against the current column potentials. After a
    // column step the column marginals are exact, and the row sums of
    // that plan are exp(f_i + lse_i): checking here converges one sweep
    // later but measures the same residual without materializing the
    // plan.
    colwise_lse(scores_t, g, row_lse);
    if (it > 0) {
      double violation = 0.0;
      for (Eigen::Index i = 0; i <= rows; ++i) {
        if (log_a[i] == kNegInf) continue;
        violation = std::max(violation, std::abs(std::exp(f[i] + row_lse[i]) -
                                                 std::exp(log_a[i])));
      }
      if (violation < params.marginal_tolerance) {
        result.converged = true;
        break;  // keep the previous sweep's potentials
      }
    }
    for (Eigen::Index i = 0; i <= rows; ++i) {
      f[i] = log_a[i] == kNegInf ? kNegInf : log_a[i] - row_lse[i];
    }
    colwise_lse(scores, f, col_lse);
    for (Eigen::Index j = 0; j <= cols; ++j) {
      g[j] = log_b[j] == kNegInf ? kNegInf : log_b[j] - col_lse[j];
    }
    result.iterations_used = it + 1;
  }

  // plan = exp(f_i + S_ij + g_j); -inf potentials/scores give zero mass.
  result.plan =
      ((scores.colwise() + f).rowwise() + g.transpose()).array().exp();
  return result;
}

}  // namespace sfmreg
