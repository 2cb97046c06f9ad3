#include "marclab/info_measures.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace marclab {

namespace {

void require_disjoint(const JointPmf& pmf, std::initializer_list<const std::vector<std::string>*> sets) {
    std::unordered_set<std::string> seen;
    for (const auto* s : sets) {
        for (const auto& name : *s) {
            pmf.axis_of(name);  // unknown-name check
            if (!seen.insert(name).second)
                throw std::invalid_argument("variable sets overlap on '" + name + "'");
        }
    }
}

double plain_entropy(const JointPmf& pmf, const std::vector<std::string>& scope) {
    if (scope.empty()) return 0.0;
    const JointPmf marg = pmf.marginalize(scope);
    double h = 0.0;
    for (double p : marg.weights())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

double entropy(const JointPmf& pmf, const std::vector<std::string>& target,
               const std::vector<std::string>& given) {
    require_disjoint(pmf, {&target, &given});
    if (given.empty()) return plain_entropy(pmf, target);
    return plain_entropy(pmf, join(target, given)) - plain_entropy(pmf, given);
}

double mutual_information(const JointPmf& pmf, const std::vector<std::string>& a,
                          const std::vector<std::string>& b,
                          const std::vector<std::string>& given) {
    require_disjoint(pmf, {&a, &b, &given});
    // I(A;B|G) = H(A|G) - H(A|B,G), expanded to four joint entropies.
    return plain_entropy(pmf, join(a, given)) + plain_entropy(pmf, join(b, given)) -
           plain_entropy(pmf, join(join(a, b), given)) - plain_entropy(pmf, given);
}

bool is_markov_chain(const JointPmf& pmf, const std::vector<std::string>& x,
                     const std::vector<std::string>& y, const std::vector<std::string>& z,
                     double tol) {
    return mutual_information(pmf, x, z, y) <= tol;
}

} // namespace marclab
