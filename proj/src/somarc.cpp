#include "marclab/somarc.hpp"

namespace marclab {

JointPmf somarc_source_pair() {
    const double third = 1.0 / 3.0;
    return JointPmf::normalized({{kS1, 2}, {kS2, 2}}, {third, third, 0.0, third}, 1e-12);
}

SourceSideInfoModel somarc_source_model() {
    const double third = 1.0 / 3.0;
    return SourceSideInfoModel(JointPmf::normalized(
        {{kS1, 2}, {kS2, 2}, {kW, 1}, {kW3, 1}}, {third, third, 0.0, third}, 1e-12));
}

DmChannel somarc_channel() {
    return DmChannel::deterministic(
        2, 2, 2, 6, 2, [](int x1, int x2, int x3) { return 2 * (x1 + x2) + x3; },
        [](int x1, int x2, int) { return x1 ^ x2; });
}

DmChannel somarc_mac_channel() {
    return DmChannel::deterministic(
        2, 2, 1, 3, 2, [](int x1, int x2, int) { return x1 + x2; },
        [](int x1, int x2, int) { return x1 ^ x2; });
}

} // namespace marclab
