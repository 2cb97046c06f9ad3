#ifndef MARCLAB_COMMON_PART_HPP
#define MARCLAB_COMMON_PART_HPP

#include "marclab/joint_pmf.hpp"

namespace marclab {

/// Gacs-Korner common part of a source pair: the maximal T with
/// T = h1(S1) = h2(S2) for deterministic h1, h2. Equivalently, the label of
/// the connected component of the support bipartite graph.
struct CommonPart {
    std::vector<int> h1;  // S1 symbol -> T label
    std::vector<int> h2;  // S2 symbol -> T label
    int t_size = 0;       // |T| = number of support components
};

/// `source` must hold exactly two variables (first treated as S1, second as
/// S2). Component labels are assigned in first-encounter order scanning S1
/// symbols, so results are reproducible. Zero-probability symbols belong to
/// no support edge; they are mapped to label 0 and do not contribute to
/// t_size.
CommonPart gacs_korner_common_part(const JointPmf& source);

} // namespace marclab

#endif
