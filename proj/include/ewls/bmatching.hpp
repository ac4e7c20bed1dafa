#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace ewls {

// Left vertices have degree exactly 1; right vertex r has degree in [bounds[r].first, bounds[r].second].
// weights[i][r] = +inf marks a missing edge.
struct MatchingProblem {
  std::vector<int> left;
  std::vector<int> right;
  std::vector<std::vector<double>> weights;
  std::vector<std::pair<long, long>> bounds;
};

struct MatchingResult {
  std::vector<int> assignment;  // right index per left index
  double weight = 0;
  bool certified = false;       // no negative residual cycle at the end
};

inline constexpr double kNoEdge = std::numeric_limits<double>::infinity();

// Successive shortest paths on the flow network source -> left (cap 1) -> right (cost w) -> sink
// ([lower, upper]). Lower bounds are handled with a lexicographic cost whose first component counts
// unmet lower-bound units. Paths are found on the graph contracted to right vertices.
MatchingResult bmatching_min_cost(const MatchingProblem& problem);

}  // namespace ewls
