#include "marclab/typicality.hpp"

#include <cmath>
#include <stdexcept>

namespace marclab {

bool strongly_typical(std::span<const std::vector<int>> sequences, const JointPmf& pmf,
                      const TypicalityQuery& q) {
    if (q.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (q.n < 1) throw std::invalid_argument("blocklength must be at least 1");
    const auto& vars = pmf.variables();
    if (sequences.size() != vars.size())
        throw std::invalid_argument("one sequence per pmf variable required");
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        if (sequences[i].size() != static_cast<std::size_t>(q.n))
            throw std::invalid_argument("sequence length mismatch for '" + vars[i].name + "'");
        for (int sym : sequences[i])
            if (sym < 0 || sym >= vars[i].alphabet_size)
                throw std::out_of_range("symbol out of alphabet for '" + vars[i].name + "'");
    }

    std::vector<int> counts(pmf.cell_count(), 0);
    std::vector<int> sym(vars.size());
    for (int k = 0; k < q.n; ++k) {
        for (std::size_t i = 0; i < vars.size(); ++i) sym[i] = sequences[i][k];
        ++counts[pmf.flat_index(sym)];
    }

    const double n = static_cast<double>(q.n);
    const auto& w = pmf.weights();
    for (std::size_t cell = 0; cell < w.size(); ++cell) {
        const double dev = std::fabs(counts[cell] / n - w[cell]);
        if (dev > q.epsilon * w[cell]) return false;
    }
    return true;
}

} // namespace marclab
