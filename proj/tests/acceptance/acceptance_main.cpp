// Acceptance suite: every release-gating check in one binary. Each criterion
// prints exactly one PASS/FAIL line; the exit status is the failure count.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "marclab/common_part.hpp"
#include "marclab/exp_integral.hpp"
#include "marclab/ergodic.hpp"
#include "marclab/fading.hpp"
#include "marclab/factorization.hpp"
#include "marclab/info_measures.hpp"
#include "marclab/mi_search.hpp"
#include "marclab/outer_bounds.hpp"
#include "marclab/rate_conditions.hpp"
#include "marclab/rng.hpp"
#include "marclab/sampling.hpp"
#include "marclab/sim/sim_cpm.hpp"
#include "marclab/sim/sim_separation.hpp"
#include "marclab/sim/sim_somarc.hpp"
#include "marclab/somarc.hpp"
#include "marclab/typicality.hpp"

using namespace marclab;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> random_simplex(int cells, Rng& rng) {
    std::vector<double> w(cells);
    double mass = 0.0;
    for (auto& x : w) {
        x = rng.exponential();
        mass += x;
    }
    for (auto& x : w) x /= mass;
    return w;
}

// --------------------------------------------------------------------------
// 1. SOMARC sum-capacity bound: max I(X1,X2;Y_S) over p(x1)p(x2) = 1.5 bits

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const DmChannel mac = somarc_mac_channel();
    SearchConfig cfg;
    cfg.seed = 7;
    const auto result = maximize_mi(mac, {"sum", {kX1, kX2}, {kY}, {}},
                                    DistFamily::product_inputs(mac), cfg);
    const double elapsed = seconds_since(t0);
    const bool pass = std::fabs(result.best_bits - 1.5) <= 1e-3 && elapsed < 5.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "SOMARC sum-capacity bound = %.6f bits (target 1.500 +- 1e-3), %.2fs",
                  result.best_bits, elapsed);
    report(1, pass, buf);
}

// --------------------------------------------------------------------------
// 2. H(S1,S2) of the example source table = log2(3)

void criterion_2() {
    const double h = entropy(somarc_source_pair(), {kS1, kS2});
    const bool pass = std::fabs(h - std::log2(3.0)) <= 1e-10;
    char buf[120];
    std::snprintf(buf, sizeof buf, "H(S1,S2) = %.12f bits (log2 3 = %.12f)", h, std::log2(3.0));
    report(2, pass, buf);
}

// --------------------------------------------------------------------------
// 3. Separation infeasibility on the SOMARC: the kappa=1 sum condition fails
//    on every product input of a 21-point-per-simplex grid

void criterion_3() {
    const DmChannel mac = somarc_mac_channel();
    const double h12 = entropy(somarc_source_pair(), {kS1, kS2});
    bool all_fail = true;
    double best = 0.0;
    for (int i = 0; i <= 20 && all_fail; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double p1 = i / 20.0;
            const double p2 = j / 20.0;
            const ConditionalPmf factors[] = {
                ConditionalPmf::marginal({{kX1, 2}}, {1.0 - p1, p1}),
                ConditionalPmf::marginal({{kX2, 2}}, {1.0 - p2, p2}),
                ConditionalPmf::marginal({{kX3, 1}}, {1.0}),
                mac.law,
            };
            const JointPmf joint = JointPmf::from_factors(factors);
            const double mi = mutual_information(joint, {kX1, kX2}, {kY});
            best = std::max(best, mi);
            if (h12 <= mi) {
                all_fail = false;
                break;
            }
        }

    // and the checker view: the necessary condition lhs <= max-rhs is violated
    SearchConfig cfg;
    cfg.seed = 11;
    const auto searched = maximize_mi(mac, {"sum", {kX1, kX2}, {kY}, {}},
                                      DistFamily::product_inputs(mac), cfg);
    ConditionReport checker;
    checker.conditions.push_back({"somarc.product.sum", h12, searched.best_bits, 0.0, false});
    checker.finalize_converse();

    const bool pass = all_fail && checker.verdict == "necessary-conditions-violated";
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "every grid point has I <= %.4f < H = %.4f; checker verdict: %s", best, h12,
                  checker.verdict.c_str());
    report(3, pass, buf);
}

// --------------------------------------------------------------------------
// 4. Uncoded SOMARC scheme: zero errors, 1e5 trials, five seeds

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t total_errors = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        total_errors += sim::run_uncoded_somarc(100000, seed).dest_trial_errors;
    const double elapsed = seconds_since(t0);
    const bool pass = total_errors == 0 && elapsed < 2.0;
    char buf[120];
    std::snprintf(buf, sizeof buf, "uncoded scheme errors = %llu over 5x1e5 trials, %.2fs",
                  static_cast<unsigned long long>(total_errors), elapsed);
    report(4, pass, buf);
}

// --------------------------------------------------------------------------
// 5. E1 accuracy against an independent quadrature/series oracle

long double oracle_e1(long double x) {
    if (x <= 2.0L) {
        const long double gamma = 0.577215664901532860606512090082402431L;
        long double term = 1.0L, sum = 0.0L;
        for (int k = 1; k <= 120; ++k) {
            term *= x / k;
            sum += (k % 2 ? term : -term) / k;
        }
        return -gamma - std::log(x) + sum;
    }
    const long double upper = 90.0L;
    const int intervals = 200000;
    const long double h = upper / intervals;
    auto f = [x](long double u) { return std::exp(-u) / (x + u); };
    long double acc = f(0.0L) + f(upper);
    for (int i = 1; i < intervals; ++i) acc += f(h * i) * (i % 2 ? 4.0L : 2.0L);
    return std::exp(-x) * acc * h / 3.0L;
}

void criterion_5() {
    const double lo = 1e-6, hi = 700.0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = lo * std::pow(hi / lo, i / 999.0);
        const long double ref = oracle_e1(static_cast<long double>(x));
        const double rel = std::fabs(static_cast<double>(exp_integral_e1(x) / ref) - 1.0);
        worst = std::max(worst, rel);
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "E1 worst relative error %.3e over 1000 points", worst);
    report(5, worst <= 1e-10, buf);
}

// --------------------------------------------------------------------------
// 6. Rayleigh closed forms vs 1e7-sample Monte Carlo, 50 random sets

void criterion_6() {
    Rng rng(606);
    int misses = 0;
    double worst_sigma = 0.0;
    for (int set = 0; set < 50; ++set) {
        std::vector<double> scales;
        const int count = 1 + static_cast<int>(rng.below(2));
        for (int i = 0; i < count; ++i) scales.push_back(0.05 + 20.0 * rng.uniform());
        const double exact = expected_log2_capacity(scales).bits;

        const std::uint64_t samples = 10'000'000;
        Rng mc(1000 + set);
        double sum = 0.0, sum_sq = 0.0;
        for (std::uint64_t i = 0; i < samples; ++i) {
            double snr = 0.0;
            for (double a : scales) snr += a * mc.exponential();
            const double v = std::log2(1.0 + snr);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / samples;
        const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
        const double sigmas = std::fabs(exact - mean) / se;
        worst_sigma = std::max(worst_sigma, sigmas);
        if (sigmas > 3.0) ++misses;
    }
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "closed forms vs 1e7-sample MC: %d/50 outside 3 sigma (worst %.2f sigma)",
                  misses, worst_sigma);
    report(6, misses == 0, buf);
}

// --------------------------------------------------------------------------
// 7. Phase-fading region arithmetic at the reference configuration

void criterion_7() {
    FadingMarcParams p;
    p.a13 = 2.0;
    p.a23 = 2.0;
    const auto df = phase_df_conditions(p);
    const auto t = phase_region(p, 1.0);
    const bool pass = df[0] && df[1] && df[2] && t[0] == std::log2(3.0) &&
                      t[1] == std::log2(3.0) && t[2] == 2.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "DF (%d,%d,%d), thresholds (%.6f, %.6f, %.6f) vs (log2 3, log2 3, 2)",
                  int(df[0]), int(df[1]), int(df[2]), t[0], t[1], t[2]);
    report(7, pass, buf);
}

// --------------------------------------------------------------------------
// 8. Theorem cross-consistency: thm6 with trivial auxiliaries equals thm1 at
//    kappa = 1 on 100 random instances

void criterion_8() {
    Rng rng(808);
    const char* thm1_labels[] = {"thm1.rly.S1", "thm1.rly.S2",  "thm1.rly.S1S2",
                                 "thm1.dst.S1", "thm1.dst.S2", "thm1.dst.S1S2"};
    const char* thm6_labels[] = {"thm6.rly.S1", "thm6.rly.S2",  "thm6.rly.S1S2",
                                 "thm6.dst.S1", "thm6.dst.S2", "thm6.dst.S1S2"};
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const SourceSideInfoModel model(JointPmf::normalized(
            {{kS1, 2}, {kS2, 2}, {kW, 2}, {kW3, 2}}, random_simplex(16, rng)));
        std::vector<double> kernel;
        for (int row = 0; row < 8; ++row) {
            const auto r = random_simplex(4, rng);
            kernel.insert(kernel.end(), r.begin(), r.end());
        }
        const DmChannel ch(ConditionalPmf({{kX1, 2}, {kX2, 2}, {kX3, 2}}, {{kY, 2}, {kY3, 2}},
                                          std::move(kernel)));
        const auto px1 = random_simplex(2, rng);
        const auto px2 = random_simplex(2, rng);
        const auto px3 = random_simplex(2, rng);

        const auto thm1 = check_thm1(model, ch, SeparationInput::independent(px1, px2, px3), 1.0);
        const CpmInputA wrapped{JointPmf::uniform({{kQ, 1}}), JointPmf::uniform({{kV1, 1}}),
                                JointPmf::uniform({{kV2, 1}}),
                                ConditionalPmf({{kS1, 2}, {kV1, 1}, {kQ, 1}}, {{kX1, 2}},
                                               {px1[0], px1[1], px1[0], px1[1]}),
                                ConditionalPmf({{kS2, 2}, {kV2, 1}, {kQ, 1}}, {{kX2, 2}},
                                               {px2[0], px2[1], px2[0], px2[1]}),
                                ConditionalPmf({{kV1, 1}, {kV2, 1}}, {{kX3, 2}}, px3)};
        const auto thm6 = check_thm6_cpm(model, ch, wrapped);

        for (int i = 0; i < 6; ++i) {
            const auto& a = thm1.find(thm1_labels[i]);
            const auto& b = thm6.find(thm6_labels[i]);
            if (std::fabs(a.lhs_bits - b.lhs_bits) > 1e-9 ||
                std::fabs(a.rhs_bits - b.rhs_bits) > 1e-9 || a.satisfied != b.satisfied)
                ++bad;
        }
        if (thm1.all_satisfied != thm6.all_satisfied) ++bad;
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d per-condition mismatches over 100 random instances", bad);
    report(8, bad == 0, buf);
}

// --------------------------------------------------------------------------
// 9. Finite-length scheme validation: in-region decodes, out-of-region
//    fails, and error rates sweep monotonically with the margins

SourceSideInfoModel copied_bit_sources(bool dest_knows_s1) {
    if (dest_knows_s1) {
        std::vector<double> w(2 * 2 * 2 * 1, 0.0);
        w[((0 * 2 + 0) * 2 + 0) * 1] = 0.5;
        w[((1 * 2 + 1) * 2 + 1) * 1] = 0.5;
        return SourceSideInfoModel(JointPmf({{kS1, 2}, {kS2, 2}, {kW, 2}, {kW3, 1}}, w));
    }
    std::vector<double> w(4, 0.0);
    w[0] = 0.5;
    w[3] = 0.5;
    return SourceSideInfoModel(JointPmf({{kS1, 2}, {kS2, 2}, {kW, 1}, {kW3, 1}}, w));
}

void criterion_9() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> u6(6, 1.0 / 6.0);

    // (a) all thm1 margins >= 0.3 bits -> p_err <= 0.05
    const SourceSideInfoModel model = copied_bit_sources(false);
    const DmChannel pipes = DmChannel::deterministic(
        6, 6, 6, 216, 36, [](int a, int b, int c) { return (a * 6 + b) * 6 + c; },
        [](int a, int b, int) { return a * 6 + b; });
    const SeparationInput input = SeparationInput::independent(u6, u6, u6);
    const auto thm1 = check_thm1(model, pipes, input, 1.0);
    double min_margin = 1e9;
    for (const auto& c : thm1.conditions) min_margin = std::min(min_margin, c.margin_bits);

    sim::BlockMarkovConfig cfg;
    cfg.m = cfg.n = 8;
    cfg.B = 3;
    cfg.rates.r1_relay = cfg.rates.r2_relay = 1.0;
    cfg.rates.r1_dest = cfg.rates.r2_dest = 1.0;
    cfg.epsilon = 1e6;
    cfg.seed = 909;
    const auto good = sim::run_separation_df(model, pipes, input, cfg, 500);

    // (b) sum rate >= thm2 bound + 0.5 -> p_err >= 0.5
    const DmChannel choked = DmChannel::deterministic(
        6, 6, 2, 2, 36, [](int, int, int c) { return c; },
        [](int a, int b, int) { return a * 6 + b; });
    SearchConfig scfg;
    scfg.seed = 909;
    scfg.random_restarts = 12;
    const double sum_bound =
        maximize_mi(choked, {"I(X1,X2,X3;Y)", {kX1, kX2, kX3}, {kY}, {}},
                    DistFamily::joint_inputs(choked), scfg)
            .best_bits;
    sim::BlockMarkovConfig bad_cfg = cfg;
    bad_cfg.rates.r1_dest = bad_cfg.rates.r2_dest = 0.875;  // sum 1.75 vs a 1-bit pipe
    const double excess = bad_cfg.rates.r1_dest + bad_cfg.rates.r2_dest - sum_bound;
    const auto bad =
        sim::run_separation_df(model, choked, SeparationInput::independent(u6, u6, {0.5, 0.5}),
                               bad_cfg, 300);

    // (c) 3-point margin sweep is monotone
    const SourceSideInfoModel informed = copied_bit_sources(true);
    const DmChannel sweep_ch = DmChannel::deterministic(
        6, 6, 4, 4, 36, [](int, int, int c) { return c; },
        [](int a, int b, int) { return a * 6 + b; });
    const SeparationInput sweep_in = SeparationInput::independent(u6, u6, {0.25, 0.25, 0.25, 0.25});
    std::vector<double> sweep;
    for (double rd : {0.875, 0.75, 0.625}) {
        sim::BlockMarkovConfig scfg2 = cfg;
        scfg2.rates.r1_dest = scfg2.rates.r2_dest = rd;
        sweep.push_back(
            sim::run_separation_df(informed, sweep_ch, sweep_in, scfg2, 400).p_err_estimate);
    }
    const bool monotone = sweep[0] >= sweep[1] && sweep[1] >= sweep[2] && sweep[0] > sweep[2];

    const double elapsed = seconds_since(t0);
    const bool pass = min_margin >= 0.3 && good.p_err_estimate <= 0.05 && excess >= 0.5 &&
                      bad.p_err_estimate >= 0.5 && monotone && elapsed < 60.0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "margins>=%.2f: p_err=%.3f (<=0.05); excess=%.2f: p_err=%.3f (>=0.5); "
                  "sweep %.3f>=%.3f>=%.3f; %.1fs",
                  min_margin, good.p_err_estimate, excess, bad.p_err_estimate, sweep[0], sweep[1],
                  sweep[2], elapsed);
    report(9, pass, buf);
}

// --------------------------------------------------------------------------
// 10. Invariant bundle (also covered by the standalone core unit suites,
//     which build without the simulator or CLI targets)

void criterion_10() {
    Rng rng(1010);
    bool ok = true;

    for (int trial = 0; trial < 25 && ok; ++trial) {
        const JointPmf p = JointPmf::normalized({{"A", 2}, {"B", 3}, {"C", 2}},
                                                random_simplex(12, rng));
        ok &= std::fabs(entropy(p, {"A", "B"}, {"C"}) -
                        (entropy(p, {"A"}, {"C"}) + entropy(p, {"B"}, {"A", "C"}))) <= 1e-10;
        ok &= mutual_information(p, {"A"}, {"B"}, {"C"}) >= -1e-10;
        ok &= std::fabs(mutual_information(p, {"A"}, {"B"}, {"C"}) -
                        mutual_information(p, {"B"}, {"A"}, {"C"})) <= 1e-10;
    }

    // Markov construction
    const ConditionalPmf chain_factors[] = {
        ConditionalPmf::marginal({{"X", 2}}, {0.4, 0.6}),
        ConditionalPmf({{"X", 2}}, {{"Y", 2}}, {0.7, 0.3, 0.2, 0.8}),
        ConditionalPmf({{"Y", 2}}, {{"Z", 2}}, {0.9, 0.1, 0.35, 0.65}),
    };
    ok &= is_markov_chain(JointPmf::from_factors(chain_factors), {"X"}, {"Y"}, {"Z"});

    // factorization round-trip
    const ConditionalPmf prod_factors[] = {
        ConditionalPmf::marginal({{"A", 2}}, {0.3, 0.7}),
        ConditionalPmf({{"A", 2}}, {{"B", 2}}, {0.6, 0.4, 0.25, 0.75}),
    };
    const JointPmf built = JointPmf::from_factors(prod_factors);
    ok &= validate_factorization(built, {{{"A"}, {}}, {{"B"}, {"A"}}}, 1e-10);

    // Gacs-Korner label-permutation invariance
    const JointPmf two_block({{"S1", 4}, {"S2", 4}},
                             {0.25, 0.05, 0, 0, 0.05, 0.15, 0, 0, 0, 0, 0.25, 0.05, 0, 0, 0.05,
                              0.15});
    const CommonPart cp = gacs_korner_common_part(two_block);
    std::vector<double> permuted(16);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const int ab[] = {a, b};
            permuted[static_cast<std::size_t>(3 - a) * 4 + b] = two_block.weight_at(ab);
        }
    const CommonPart cq =
        gacs_korner_common_part(JointPmf({{"S1", 4}, {"S2", 4}}, std::move(permuted)));
    ok &= cp.t_size == 2 && cq.t_size == cp.t_size;

    // typicality boundaries
    const JointPmf bit = JointPmf::uniform({{"X", 2}});
    const std::vector<std::vector<int>> exact = {{0, 1, 0, 1}};
    const std::vector<std::vector<int>> off = {{0, 1, 1, 1}};
    ok &= strongly_typical(exact, bit, {1e-12, 4});
    ok &= !strongly_typical(off, bit, {1e-12, 4});
    ok &= strongly_typical(off, bit, {1e9, 4});

    // RNG reproducibility
    const JointPmf four({{"X", 4}}, {0.1, 0.2, 0.3, 0.4});
    ok &= sample(four, 5000, 42) == sample(four, 5000, 42);

    report(10, ok, "entropy/MI/Markov/factorization/common-part/typicality/RNG invariants");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
