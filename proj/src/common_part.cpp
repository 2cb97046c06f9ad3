#include "marclab/common_part.hpp"

#include <stdexcept>
#include <vector>

namespace marclab {

CommonPart gacs_korner_common_part(const JointPmf& source) {
    if (source.variables().size() != 2)
        throw std::invalid_argument("gacs_korner_common_part expects a pmf over exactly two variables");
    const int n1 = source.variables()[0].alphabet_size;
    const int n2 = source.variables()[1].alphabet_size;
    const auto& w = source.weights();

    CommonPart cp;
    cp.h1.assign(n1, 0);
    cp.h2.assign(n2, 0);
    std::vector<bool> done1(n1, false), done2(n2, false);

    int next_label = 0;
    std::vector<int> stack1, stack2;
    for (int seed = 0; seed < n1; ++seed) {
        if (done1[seed]) continue;
        bool supported = false;
        for (int s2 = 0; s2 < n2; ++s2) supported |= w[seed * n2 + s2] > 0.0;
        if (!supported) continue;  // zero-probability symbol, no edge

        const int label = next_label++;
        stack1.assign(1, seed);
        done1[seed] = true;
        cp.h1[seed] = label;
        while (!stack1.empty() || !stack2.empty()) {
            while (!stack1.empty()) {
                const int s1 = stack1.back();
                stack1.pop_back();
                for (int s2 = 0; s2 < n2; ++s2) {
                    if (w[s1 * n2 + s2] > 0.0 && !done2[s2]) {
                        done2[s2] = true;
                        cp.h2[s2] = label;
                        stack2.push_back(s2);
                    }
                }
            }
            while (!stack2.empty()) {
                const int s2 = stack2.back();
                stack2.pop_back();
                for (int s1 = 0; s1 < n1; ++s1) {
                    if (w[s1 * n2 + s2] > 0.0 && !done1[s1]) {
                        done1[s1] = true;
                        cp.h1[s1] = label;
                        stack1.push_back(s1);
                    }
                }
            }
        }
    }
    cp.t_size = next_label;
    return cp;
}

} // namespace marclab
