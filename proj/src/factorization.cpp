#include "marclab/factorization.hpp"

#include <stdexcept>
#include <unordered_set>

namespace marclab {

bool validate_factorization(const JointPmf& pmf, const std::vector<FactorScope>& pattern,
                            double tol) {
    if (pattern.empty()) throw std::invalid_argument("factorization pattern is empty");

    std::unordered_set<std::string> produced;
    std::size_t total_outputs = 0;
    for (const auto& scope : pattern) {
        if (scope.outputs.empty())
            throw std::invalid_argument("factorization pattern has a factor with no outputs");
        for (const auto& g : scope.given) {
            pmf.axis_of(g);
            if (!produced.count(g))
                throw std::invalid_argument("pattern conditions on '" + g +
                                            "' before it is produced");
        }
        for (const auto& o : scope.outputs) {
            pmf.axis_of(o);
            if (!produced.insert(o).second)
                throw std::invalid_argument("pattern produces '" + o + "' twice");
            ++total_outputs;
        }
    }
    if (total_outputs != pmf.variables().size())
        throw std::invalid_argument("pattern must cover every variable exactly once");

    std::vector<ConditionalPmf> factors;
    factors.reserve(pattern.size());
    for (const auto& scope : pattern)
        factors.push_back(pmf.conditional(scope.outputs, scope.given));

    std::vector<std::string> order;
    for (const auto& v : pmf.variables()) order.push_back(v.name);
    const JointPmf rebuilt = JointPmf::from_factors(factors, order);
    return pmf.total_variation(rebuilt) <= tol;
}

} // namespace marclab
