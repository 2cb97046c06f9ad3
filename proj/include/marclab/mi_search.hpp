#ifndef MARCLAB_MI_SEARCH_HPP
#define MARCLAB_MI_SEARCH_HPP

#include "marclab/models.hpp"

namespace marclab {

/// A labeled conditional mutual information I(a ; b | given), evaluated on
/// the joint induced by a candidate input distribution and the channel law.
struct MiObjective {
    std::string label;
    std::vector<std::string> a;
    std::vector<std::string> b;
    std::vector<std::string> given;
};

/// Factorization pattern of the input-distribution family being searched.
/// Factors must be topologically ordered and must jointly produce X1, X2, X3
/// (plus any auxiliaries they introduce).
struct FamilyFactor {
    std::vector<VariableId> given;
    std::vector<VariableId> outputs;
};

struct DistFamily {
    std::vector<FamilyFactor> factors;

    static DistFamily joint_inputs(const DmChannel& ch);    // p(x1,x2,x3)
    static DistFamily product_inputs(const DmChannel& ch);  // p(x1)p(x2)p(x3)
    /// p(v) p(x1,x2|v) p(x3|v) with |V| = aux_cardinality.
    static DistFamily aux_broadcast(const DmChannel& ch, int aux_cardinality);
};

struct MiSearchResult {
    double best_bits = 0.0;
    std::vector<ConditionalPmf> best_factors;  // one per family factor
    int evaluations = 0;
};

/// Heuristic maximization of the objective over the family: a simplex grid
/// (skipped when its size explodes), Dirichlet(1,...,1) random restarts with
/// per-restart derived seeds, and coordinate ascent that line-searches one
/// simplex row at a time (golden section, capped sweeps). Deterministic given
/// cfg.seed; the reported value is a lower bound on the true maximum.
MiSearchResult maximize_mi(const DmChannel& ch, const MiObjective& objective,
                           const DistFamily& family, const SearchConfig& cfg);

} // namespace marclab

#endif
