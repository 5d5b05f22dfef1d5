#include <limits>

#include "sfmreg/features.hpp"
#include "sfmreg/rng.hpp"

namespace sfmreg {

SuperpointSet sample_superpoints(const OrientedCloud& cloud, int n_prime,
                                 std::uint64_t seed) {
  validate_cloud(cloud);
  const int n = static_cast<int>(cloud.size());
  if (n_prime < 1 || n_prime > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_prime must be in [1, " + std::to_string(n) + "]");
  }

  SuperpointSet out;
  out.indices.reserve(n_prime);

  Rng rng(seed);
  int current = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  out.indices.push_back(current);

  // min squared distance from each point to the selected set
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> selected(n, 0);
  selected[current] = 1;
  for (int step = 1; step < n_prime; ++step) {
    int farthest = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d2 = (cloud.points[i] - cloud.points[current]).squaredNorm();
      if (d2 < min_d2[i]) min_d2[i] = d2;
      // Strict >, so ties keep the lower index; duplicates of an already
      // selected point stay eligible until chosen.
      if (!selected[i] && min_d2[i] > best) {
        best = min_d2[i];
        farthest = i;
      }
    }
    current = farthest;
    selected[current] = 1;
    out.indices.push_back(current);
  }
  return out;
}

}  // namespace sfmreg
