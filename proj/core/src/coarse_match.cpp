#include <algorithm>
#include <set>

#include "sfmreg/matching.hpp"

namespace sfmreg {

namespace {

// Indices of the `rank` best entries of a similarity row/column, ordered
// by (similarity desc, index asc). Selection scan, no full sort.
void top_ranked(const double* values, int stride, int count, int rank,
                std::vector<int>& out) {
  out.clear();
  for (int idx = 0; idx < count; ++idx) {
    const double v = values[static_cast<std::ptrdiff_t>(idx) * stride];
    // Find insertion position among the current best.
    std::size_t pos = out.size();
    while (pos > 0) {
      const double other =
          values[static_cast<std::ptrdiff_t>(out[pos - 1]) * stride];
      if (other > v || (other == v && out[pos - 1] < idx)) break;
      --pos;
    }
    if (pos >= static_cast<std::size_t>(rank)) continue;
    out.insert(out.begin() + pos, idx);
    if (out.size() > static_cast<std::size_t>(rank)) out.pop_back();
  }
}

}  // namespace

CoarseCorrespondences coarse_match(const DescriptorTable& desc_p,
                                   const DescriptorTable& desc_q,
                                   const CoarseMatchParams& params) {
  const Eigen::Index np = desc_p.rows();
  const Eigen::Index nq = desc_q.rows();
  if (np == 0 || nq == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty descriptor table");
  }
  if (desc_p.dim() != desc_q.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "descriptor dims differ: " + std::to_string(desc_p.dim()) +
                    " vs " + std::to_string(desc_q.dim()));
  }
  if (params.k < 1 || static_cast<long long>(params.k) >
                          static_cast<long long>(np) * nq) {
    throw Error(ErrorCode::kInvalidArgument, "k out of range");
  }
  if (params.mutual_rank < 1) {
    throw Error(ErrorCode::kInvalidArgument, "mutual_rank must be >= 1");
  }

  // Row-major so rows are contiguous and columns strided.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      sim = desc_p.vectors * desc_q.vectors.transpose();

  // A pair can only survive the mutual filter if it appears in a top list
  // on both sides; enumerate those instead of ranking every cell.
  std::vector<std::vector<int>> top_q_of_p(np), top_p_of_q(nq);
  std::vector<int> scratch;
  for (Eigen::Index i = 0; i < np; ++i) {
    top_ranked(sim.data() + i * nq, 1, static_cast<int>(nq),
               params.mutual_rank, scratch);
    top_q_of_p[i] = scratch;
  }
  for (Eigen::Index j = 0; j < nq; ++j) {
    top_ranked(sim.data() + j, static_cast<int>(nq), static_cast<int>(np),
               params.mutual_rank, scratch);
    top_p_of_q[j] = scratch;
  }

  struct Scored {
    double score;
    int i, j;
  };
  std::vector<Scored> surviving;
  for (Eigen::Index i = 0; i < np; ++i) {
    for (const int j : top_q_of_p[i]) {
      const auto& back = top_p_of_q[j];
      if (std::find(back.begin(), back.end(), static_cast<int>(i)) ==
          back.end()) {
        continue;
      }
      const double score = (1.0 + sim(i, j)) / 2.0;
      if (!(score > params.min_score)) continue;
      surviving.push_back({score, static_cast<int>(i), j});
    }
  }
  if (surviving.empty()) {
    throw Error(ErrorCode::kNoSurvivingPairs,
                "mutual top-" + std::to_string(params.mutual_rank) +
                    " filter eliminated all candidate pairs");
  }

  std::sort(surviving.begin(), surviving.end(),
            [](const Scored& a, const Scored& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.i != b.i) return a.i < b.i;
              return a.j < b.j;
            });
  if (surviving.size() > static_cast<std::size_t>(params.k)) {
    surviving.resize(params.k);
  }

  CoarseCorrespondences out;
  out.pairs.reserve(surviving.size());
  out.scores.reserve(surviving.size());
  for (const auto& s : surviving) {
    out.pairs.emplace_back(s.i, s.j);
    out.scores.push_back(s.score);
  }
  return out;
}

}  // namespace sfmreg
