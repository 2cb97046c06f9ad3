#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "marclab/common_part.hpp"
#include "marclab/rng.hpp"
#include "marclab/somarc.hpp"

using namespace marclab;

namespace {

// Independent oracle: count connected components of the support bipartite
// graph by label propagation until a fixed point.
int component_count_oracle(const JointPmf& p) {
    const int n1 = p.variables()[0].alphabet_size;
    const int n2 = p.variables()[1].alphabet_size;
    std::vector<int> l1(n1), l2(n2, -1);
    for (int i = 0; i < n1; ++i) l1[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b) {
                const int ab[] = {a, b};
                if (p.weight_at(ab) <= 0.0) continue;
                if (l2[b] == -1 || l2[b] > l1[a]) {
                    l2[b] = l1[a];
                    changed = true;
                } else if (l1[a] > l2[b]) {
                    l1[a] = l2[b];
                    changed = true;
                }
            }
    }
    std::set<int> labels;
    for (int a = 0; a < n1; ++a) {
        bool edge = false;
        for (int b = 0; b < n2; ++b) {
            const int ab[] = {a, b};
            edge |= p.weight_at(ab) > 0.0;
        }
        if (edge) labels.insert(l1[a]);
    }
    return static_cast<int>(labels.size());
}

JointPmf random_support_pmf(int n1, int n2, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n1) * n2, 0.0);
    double mass = 0.0;
    for (auto& x : w) {
        if (rng.uniform() < 0.45) {
            x = 0.05 + rng.uniform();
            mass += x;
        }
    }
    if (mass == 0.0) {
        w[0] = 1.0;
        mass = 1.0;
    }
    for (auto& x : w) x /= mass;
    return JointPmf::normalized({{"S1", n1}, {"S2", n2}}, std::move(w));
}

} // namespace

TEST_CASE("the example source table has a connected support graph") {
    const CommonPart cp = gacs_korner_common_part(somarc_source_pair());
    CHECK(cp.t_size == 1);
    CHECK(cp.t_size == component_count_oracle(somarc_source_pair()));
    CHECK(cp.h1[0] == cp.h2[0]);
    CHECK(cp.h1[1] == cp.h2[1]);
}

TEST_CASE("block-diagonal support splits into two components") {
    const JointPmf p({{"S1", 2}, {"S2", 2}}, {0.5, 0.0, 0.0, 0.5});
    const CommonPart cp = gacs_korner_common_part(p);
    CHECK(cp.t_size == 2);
    CHECK(cp.h1 == std::vector<int>{0, 1});
    CHECK(cp.h2 == std::vector<int>{0, 1});
}

TEST_CASE("independent full-support pair has a trivial common part") {
    const CommonPart cp = gacs_korner_common_part(JointPmf::uniform({{"S1", 3}, {"S2", 4}}));
    CHECK(cp.t_size == 1);
}

TEST_CASE("h1 and h2 agree on every supported pair") {
    Rng rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const JointPmf p = random_support_pmf(4, 5, rng);
        const CommonPart cp = gacs_korner_common_part(p);
        CHECK(cp.t_size == component_count_oracle(p));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 5; ++b) {
                const int ab[] = {a, b};
                if (p.weight_at(ab) > 0.0) CHECK(cp.h1[a] == cp.h2[b]);
            }
    }
}

TEST_CASE("permuting alphabet labels preserves t_size and the partition") {
    Rng rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const JointPmf p = random_support_pmf(4, 4, rng);
        const CommonPart cp = gacs_korner_common_part(p);

        // permute the S1 alphabet by reversal
        std::vector<double> w(p.weights().size());
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const int ab[] = {a, b};
                w[static_cast<std::size_t>(3 - a) * 4 + b] = p.weight_at(ab);
            }
        const JointPmf q = JointPmf::normalized({{"S1", 4}, {"S2", 4}}, std::move(w));
        const CommonPart cq = gacs_korner_common_part(q);
        CHECK(cq.t_size == cp.t_size);
        // labels may differ, but the induced partition of supported S1
        // symbols must match (zero-probability symbols carry a dummy label)
        auto supported = [&](int a) {
            for (int b = 0; b < 4; ++b) {
                const int ab[] = {a, b};
                if (p.weight_at(ab) > 0.0) return true;
            }
            return false;
        };
        for (int a = 0; a < 4; ++a)
            for (int a2 = 0; a2 < 4; ++a2) {
                if (!supported(a) || !supported(a2)) continue;
                CHECK((cp.h1[a] == cp.h1[a2]) == (cq.h1[3 - a] == cq.h1[3 - a2]));
            }
    }
}

TEST_CASE("two variables are required") {
    CHECK_THROWS(static_cast<void>(gacs_korner_common_part(
        JointPmf::uniform({{"A", 2}, {"B", 2}, {"C", 2}}))));
}
