#ifndef MARCLAB_SAMPLING_HPP
#define MARCLAB_SAMPLING_HPP

#include <cstdint>

#include "marclab/joint_pmf.hpp"

namespace marclab {

/// n iid draws from the joint, returned as one symbol sequence per variable
/// (in the pmf's variable order). Identical seeds give identical output.
std::vector<std::vector<int>> sample(const JointPmf& pmf, int n, std::uint64_t seed);

} // namespace marclab

#endif
