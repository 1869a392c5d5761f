#pragma once

#include <utility>
#include <vector>

namespace mcbp {

using Arc = std::pair<int, int>;

// Arc-branching state of one search node. Forced arcs must appear in the
// solution; forbidden arcs must not. Forced arcs form vertex-disjoint partial
// paths, which is checked when the pricing graph is built.
struct BranchState {
    std::vector<Arc> forced;
    std::vector<Arc> forbidden;
};

}  // namespace mcbp
