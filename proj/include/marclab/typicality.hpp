#ifndef MARCLAB_TYPICALITY_HPP
#define MARCLAB_TYPICALITY_HPP

#include "marclab/joint_pmf.hpp"

namespace marclab {

struct TypicalityQuery {
    double epsilon = 0.1;
    int n = 1;
};

/// Strong typicality: the tuple of sequences (one per pmf variable, each of
/// length q.n) lies in the epsilon-strongly typical set iff for every joint
/// symbol a, |N(a)/n - p(a)| <= epsilon * p(a). The zero-probability clause
/// (N(a) = 0 whenever p(a) = 0) is implied. Note that for epsilon < 1 the
/// lower bound forces every in-support symbol to appear.
bool strongly_typical(std::span<const std::vector<int>> sequences, const JointPmf& pmf,
                      const TypicalityQuery& q);

} // namespace marclab

#endif
