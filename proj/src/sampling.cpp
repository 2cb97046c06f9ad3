#include "marclab/sampling.hpp"

#include <algorithm>
#include <stdexcept>

#include "marclab/rng.hpp"

namespace marclab {

std::vector<std::vector<int>> sample(const JointPmf& pmf, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count must be at least 1");
    const auto& w = pmf.weights();
    std::vector<double> cdf(w.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    const std::size_t nvars = pmf.variables().size();
    std::vector<std::vector<int>> out(nvars, std::vector<int>(n));
    std::vector<int> sym(nvars);
    for (int k = 0; k < n; ++k) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t cell = std::min<std::size_t>(it - cdf.begin(), w.size() - 1);
        pmf.unflatten(cell, sym);
        for (std::size_t i = 0; i < nvars; ++i) out[i][k] = sym[i];
    }
    return out;
}

} // namespace marclab
