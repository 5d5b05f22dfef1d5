#include <map>

#include "sfmreg/matching.hpp"

namespace sfmreg {

CorrespondenceSet extract_matches(const LocalGroupPair& groups,
                                  const std::vector<TransportPlan>& plans,
                                  double confidence_min) {
  if (plans.size() != groups.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected one transport plan per group");
  }
  const int g = groups.group_size;

  // Ordered map keys the dedup reduction by (src,dst) so the outcome is
  // independent of group processing order.
  std::map<std::pair<int, int>, double> best;
  for (std::size_t r = 0; r < groups.size(); ++r) {
    const Eigen::MatrixXd& plan = plans[r].plan;
    if (plan.rows() != g + 1 || plan.cols() != g + 1) {
      throw Error(ErrorCode::kInvalidArgument, "plan size mismatch");
    }
    const auto& src_pad = groups.src_padding[r];
    const auto& dst_pad = groups.dst_padding[r];
    for (int i = 0; i < g; ++i) {
      if (src_pad[i]) continue;
      // Row argmax over interior + slack; slack winning means unmatched.
      int arg_j = -1;
      double best_row = -1.0;
      for (int j = 0; j <= g; ++j) {
        if (j < g && dst_pad[j]) continue;
        if (plan(i, j) > best_row) {
          best_row = plan(i, j);
          arg_j = j;
        }
      }
      if (arg_j < 0 || arg_j == g) continue;
      if (!(plan(i, arg_j) >= confidence_min)) continue;
      // Column argmax must point back at this row.
      bool column_max = true;
      for (int i2 = 0; i2 <= g; ++i2) {
        if (i2 < g && src_pad[i2]) continue;
        if (i2 != i && plan(i2, arg_j) > plan(i, arg_j)) {
          column_max = false;
          break;
        }
      }
      if (!column_max) continue;

      const std::pair<int, int> key{groups.src_indices[r][i],
                                    groups.dst_indices[r][arg_j]};
      const auto it = best.find(key);
      if (it == best.end() || plan(i, arg_j) > it->second) {
        best[key] = plan(i, arg_j);
      }
    }
  }

  CorrespondenceSet out;
  out.pairs.reserve(best.size());
  out.scores.reserve(best.size());
  for (const auto& [key, score] : best) {
    out.pairs.push_back(key);
    out.scores.push_back(score);
  }
  return out;
}

}  // namespace sfmreg
