#ifndef MARCLAB_FACTORIZATION_HPP
#define MARCLAB_FACTORIZATION_HPP

#include "marclab/joint_pmf.hpp"

namespace marclab {

/// One factor scope of a factorization pattern: p(outputs | given).
struct FactorScope {
    std::vector<std::string> outputs;
    std::vector<std::string> given;
};

/// True iff `pmf` equals the product of its own conditionals along the
/// pattern, within total-variation `tol`. The pattern must be well formed:
/// factor outputs partition the variable set and every conditioning variable
/// is produced by an earlier factor. Rows conditioned on zero-mass events are
/// filled uniformly before the rebuild.
bool validate_factorization(const JointPmf& pmf, const std::vector<FactorScope>& pattern,
                            double tol = 1e-10);

} // namespace marclab

#endif
