#ifndef MARCLAB_INFO_MEASURES_HPP
#define MARCLAB_INFO_MEASURES_HPP

#include "marclab/joint_pmf.hpp"

namespace marclab {

// All information measures are in bits (log base 2), with 0 log 0 = 0.

/// H(target | given). Pass an empty `given` for unconditional entropy.
double entropy(const JointPmf& pmf, const std::vector<std::string>& target,
               const std::vector<std::string>& given = {});

/// I(a ; b | given).
double mutual_information(const JointPmf& pmf, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given = {});

/// True iff I(x ; z | y) <= tol, i.e. x - y - z forms a Markov chain.
bool is_markov_chain(const JointPmf& pmf, const std::vector<std::string>& x,
                     const std::vector<std::string>& y, const std::vector<std::string>& z,
                     double tol = 1e-10);

} // namespace marclab

#endif
