// marclab: batch front end for the MARC/MABRC rate-region checkers, fading
// evaluators, and coding-scheme simulators. JSON in, JSON + CSV out; exit
// codes: 0 all checks pass, 2 a condition failed or a converse is violated,
// 1 usage or input error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "marclab/fading.hpp"
#include "marclab/info_measures.hpp"
#include "marclab/mi_search.hpp"
#include "marclab/outer_bounds.hpp"
#include "marclab/pmf_json.hpp"
#include "marclab/rate_conditions.hpp"
#include "marclab/sim/sim_cpm.hpp"
#include "marclab/sim/sim_separation.hpp"
#include "marclab/sim/sim_somarc.hpp"
#include "marclab/somarc.hpp"

namespace {

constexpr const char* kVersion = "marclab 0.1.0";

using nlohmann::json;
using namespace marclab;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("'" + path + "': " + e.what());
    }
}

void write_report(const std::string& out_dir, const std::string& name, json report,
                  const json& resolved_config) {
    report["tool"] = kVersion;
    report["resolved_config"] = resolved_config;
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path);
    out << report.dump(2) << "\n";
    std::cout << "report: " << path.string() << "\n";
}

void print_conditions(const ConditionReport& report) {
    for (const auto& c : report.conditions)
        std::cout << "  " << (c.satisfied ? "ok  " : "FAIL") << "  " << c.label
                  << "  lhs=" << c.lhs_bits << "  rhs=" << c.rhs_bits
                  << "  margin=" << c.margin_bits << "\n";
    std::cout << "verdict: " << report.verdict << "\n";
}

struct CommonArgs {
    std::string model_file, channel_file, input_file, out_dir = ".";
    double kappa = 1.0;
    double epsilon = 0.1;
    std::uint64_t trials = 500;
    std::uint64_t seed = 1;
    bool csv = false;
    bool mabrc = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--model", args.model_file, "source/side-information model JSON");
    cmd->add_option("--channel", args.channel_file, "channel law JSON");
    cmd->add_option("--input", args.input_file, "input-distribution / parameter JSON");
    cmd->add_option("--kappa", args.kappa, "source-channel rate (channel uses per sample)");
    cmd->add_option("--epsilon", args.epsilon, "typicality epsilon override");
    cmd->add_option("--trials", args.trials, "Monte-Carlo trials");
    cmd->add_option("--seed", args.seed, "seed for all randomness");
    cmd->add_option("--out", args.out_dir, "output directory for reports");
    cmd->add_flag("--csv", args.csv, "also write CSV sweep data");
    cmd->add_flag("--mabrc", args.mabrc, "broadcast mode (relay must also decode)");
}

int run_region(const CommonArgs& args, const std::string& theorem) {
    const SourceSideInfoModel model = SourceSideInfoModel::from_json(load_json(args.model_file));
    const DmChannel channel = DmChannel::from_json(load_json(args.channel_file));
    const json input = load_json(args.input_file);

    ConditionReport report;
    if (theorem == "1") {
        report = check_thm1(model, channel, SeparationInput::from_json(input), args.kappa);
    } else if (theorem == "6") {
        report = check_thm6_cpm(model, channel, CpmInputA::from_json(input));
    } else if (theorem == "7") {
        report = check_thm7_cpm(model, channel, CpmInputB::from_json(input));
    } else if (theorem == "crbc") {
        report = check_crbc(model, channel, joint_pmf_from_json(input), args.kappa);
    } else {
        throw std::runtime_error("unknown theorem '" + theorem + "'");
    }

    print_conditions(report);
    json resolved = {{"command", "region"},
                     {"theorem", theorem},
                     {"kappa", args.kappa},
                     {"model", args.model_file},
                     {"channel", args.channel_file},
                     {"input", args.input_file}};
    write_report(args.out_dir, "region_thm" + theorem + ".json", report.to_json(), resolved);
    return report.all_satisfied ? 0 : 2;
}

int run_outer(const CommonArgs& args, const std::string& theorem) {
    const SourceSideInfoModel model = SourceSideInfoModel::from_json(load_json(args.model_file));
    const DmChannel channel = DmChannel::from_json(load_json(args.channel_file));
    SearchConfig cfg;
    cfg.seed = args.seed;

    ConditionReport report = check_outer_thm2(model, channel, args.kappa, cfg);
    if (theorem == "3") {
        const ConditionReport relay = check_outer_thm3_relay(model, channel, args.kappa, cfg);
        report.conditions.insert(report.conditions.end(), relay.conditions.begin(),
                                 relay.conditions.end());
        report.finalize_converse();
    } else if (theorem != "2") {
        throw std::runtime_error("outer bound theorem must be 2 or 3");
    }

    print_conditions(report);
    json resolved = {{"command", "outer"},
                     {"theorem", theorem},
                     {"kappa", args.kappa},
                     {"seed", args.seed},
                     {"search",
                      {{"grid_points_per_simplex_dim", cfg.grid_points_per_simplex_dim},
                       {"random_restarts", cfg.random_restarts},
                       {"aux_cardinality", cfg.aux_cardinality}}},
                     {"model", args.model_file},
                     {"channel", args.channel_file}};
    write_report(args.out_dir, "outer_thm" + theorem + ".json", report.to_json(), resolved);
    return report.all_satisfied ? 0 : 2;
}

int run_fading(const CommonArgs& args, const std::string& check) {
    const FadingMarcParams params = FadingMarcParams::from_json(load_json(args.input_file));
    json resolved = {{"command", "fading"},
                     {"check", check},
                     {"kappa", args.kappa},
                     {"seed", args.seed},
                     {"input", args.input_file},
                     {"mabrc", args.mabrc}};
    McParams mc;
    mc.seed = args.seed;

    if (check == "df") {
        const auto df = params.kind == FadingKind::Phase ? phase_df_conditions(params)
                                                         : rayleigh_df_conditions(params);
        const bool all = df[0] && df[1] && df[2];
        std::cout << "relay-decoding conditions: " << (df[0] ? "ok" : "FAIL") << ", "
                  << (df[1] ? "ok" : "FAIL") << ", " << (df[2] ? "ok" : "FAIL") << "\n";
        write_report(args.out_dir, "fading_df.json",
                     {{"df_conditions", {df[0], df[1], df[2]}}, {"hold", all}}, resolved);
        return all ? 0 : 2;
    }
    if (check == "region") {
        json thresholds = json::array();
        if (params.kind == FadingKind::Phase) {
            const auto t = phase_region(params, args.kappa);
            for (double v : t) {
                thresholds.push_back({{"bits", v}, {"std_error", 0.0}, {"exact", true}});
                std::cout << "threshold: " << v << " bits\n";
            }
        } else {
            const auto t = rayleigh_region(params, args.kappa, mc);
            for (const auto& v : t) {
                thresholds.push_back(
                    {{"bits", v.bits}, {"std_error", v.std_error}, {"exact", v.exact}});
                std::cout << "threshold: " << v.bits << " bits (se " << v.std_error << ")\n";
            }
        }
        write_report(args.out_dir, "fading_region.json", {{"thresholds", thresholds}}, resolved);
        return 0;
    }
    if (check == "separation") {
        const SourceSideInfoModel model =
            SourceSideInfoModel::from_json(load_json(args.model_file));
        const SourceEntropies entropies = SourceEntropies::from_model(model);
        const RegionReport report =
            check_separation_optimal(entropies, params, args.kappa, args.mabrc, mc);
        json out = report.to_json();
        out["entropies"] = entropies.to_json();
        std::cout << "verdict: " << out.at("verdict").get<std::string>() << "\n";
        resolved["model"] = args.model_file;
        write_report(args.out_dir, "fading_separation.json", out, resolved);
        return report.verdict == SeparationVerdict::Achievable ? 0 : 2;
    }
    throw std::runtime_error("fading check must be df, region, or separation");
}

sim::BlockMarkovConfig parse_sim_config(const json& j, const CommonArgs& args,
                                        bool epsilon_overridden) {
    sim::BlockMarkovConfig cfg;
    const json& c = j.at("config");
    cfg.m = c.at("m").get<int>();
    cfg.n = c.at("n").get<int>();
    cfg.B = c.at("B").get<int>();
    if (c.contains("epsilon")) cfg.epsilon = c.at("epsilon").get<double>();
    if (epsilon_overridden) cfg.epsilon = args.epsilon;
    const json& r = c.at("rates");
    if (r.contains("r1_relay")) cfg.rates.r1_relay = r.at("r1_relay").get<double>();
    if (r.contains("r2_relay")) cfg.rates.r2_relay = r.at("r2_relay").get<double>();
    if (r.contains("r1_dest")) cfg.rates.r1_dest = r.at("r1_dest").get<double>();
    if (r.contains("r2_dest")) cfg.rates.r2_dest = r.at("r2_dest").get<double>();
    if (r.contains("r1")) cfg.rates.r1 = r.at("r1").get<double>();
    if (r.contains("r2")) cfg.rates.r2 = r.at("r2").get<double>();
    cfg.seed = args.seed;
    cfg.mabrc = args.mabrc;
    return cfg;
}

void append_csv_row(std::ostream& csv, const std::string& label,
                    const sim::BlockMarkovConfig& cfg, const sim::SimReport& report) {
    csv << label << "," << cfg.rates.r1_relay << "," << cfg.rates.r2_relay << ","
        << cfg.rates.r1_dest << "," << cfg.rates.r2_dest << "," << cfg.rates.r1 << ","
        << cfg.rates.r2 << "," << report.p_err_estimate << "," << report.wilson_lo << ","
        << report.wilson_hi << "\n";
}

int run_simulate(const CommonArgs& args, const std::string& scheme, bool epsilon_overridden) {
    const SourceSideInfoModel model = SourceSideInfoModel::from_json(load_json(args.model_file));
    const DmChannel channel = DmChannel::from_json(load_json(args.channel_file));
    const json input_file = load_json(args.input_file);
    const json& input = input_file.at("input");

    auto run_one = [&](const sim::BlockMarkovConfig& cfg) {
        if (scheme == "sep")
            return sim::run_separation_df(model, channel, SeparationInput::from_json(input), cfg,
                                          args.trials);
        if (scheme == "cpm-a")
            return sim::run_cpm_scheme_a(model, channel, CpmInputA::from_json(input), cfg,
                                         args.trials);
        if (scheme == "cpm-b")
            return sim::run_cpm_scheme_b(model, channel, CpmInputB::from_json(input), cfg,
                                         args.trials);
        throw std::runtime_error("scheme must be sep, cpm-a, or cpm-b");
    };

    const sim::BlockMarkovConfig base = parse_sim_config(input_file, args, epsilon_overridden);
    const sim::SimReport report = run_one(base);
    std::cout << "p_err = " << report.p_err_estimate << "  [" << report.wilson_lo << ", "
              << report.wilson_hi << "]  relay_trial_errors = " << report.relay_trial_errors
              << "  dest_trial_errors = " << report.dest_trial_errors << "\n";

    json resolved = {{"command", "simulate"}, {"scheme", scheme},
                     {"trials", args.trials},  {"seed", args.seed},
                     {"model", args.model_file}, {"channel", args.channel_file},
                     {"input", args.input_file}, {"mabrc", args.mabrc}};
    write_report(args.out_dir, "simulate_" + scheme + ".json", report.to_json(), resolved);

    if (args.csv) {
        std::filesystem::create_directories(args.out_dir);
        const auto path = std::filesystem::path(args.out_dir) / ("sweep_" + scheme + ".csv");
        std::ofstream csv(path);
        csv << "label,r1_relay,r2_relay,r1_dest,r2_dest,r1,r2,p_err,wilson_lo,wilson_hi\n";
        append_csv_row(csv, "base", base, report);
        if (input_file.contains("sweep")) {
            for (const auto& point : input_file.at("sweep")) {
                sim::BlockMarkovConfig cfg = base;
                const json& r = point.at("rates");
                if (r.contains("r1_relay")) cfg.rates.r1_relay = r.at("r1_relay").get<double>();
                if (r.contains("r2_relay")) cfg.rates.r2_relay = r.at("r2_relay").get<double>();
                if (r.contains("r1_dest")) cfg.rates.r1_dest = r.at("r1_dest").get<double>();
                if (r.contains("r2_dest")) cfg.rates.r2_dest = r.at("r2_dest").get<double>();
                if (r.contains("r1")) cfg.rates.r1 = r.at("r1").get<double>();
                if (r.contains("r2")) cfg.rates.r2 = r.at("r2").get<double>();
                append_csv_row(csv, point.value("label", "point"), cfg, run_one(cfg));
            }
        }
        std::cout << "csv: " << path.string() << "\n";
    }
    return 0;
}

int run_somarc_demo(const CommonArgs& args) {
    const sim::SimReport report = sim::run_uncoded_somarc(args.trials, args.seed);
    SearchConfig cfg;
    cfg.seed = args.seed;
    const DmChannel mac = somarc_mac_channel();
    const auto bound =
        maximize_mi(mac, {"I(X1,X2;Y_S)", {kX1, kX2}, {kY}, {}}, DistFamily::product_inputs(mac),
                    cfg);
    const double source_entropy = entropy(somarc_source_pair(), {kS1, kS2});

    std::cout << "uncoded scheme errors: " << report.dest_trial_errors << " / " << report.trials
              << "\n";
    std::cout << "sum-capacity bound over product inputs ~ " << bound.best_bits << " bits\n";
    std::cout << "H(S1,S2) = " << source_entropy << " bits"
              << (source_entropy > bound.best_bits ? "  (separation infeasible)" : "") << "\n";

    json out = {{"uncoded", report.to_json()},
                {"sum_capacity_bound_bits", bound.best_bits},
                {"source_entropy_bits", source_entropy},
                {"separation_infeasible", source_entropy > bound.best_bits}};
    json resolved = {{"command", "somarc-demo"}, {"trials", args.trials}, {"seed", args.seed}};
    write_report(args.out_dir, "somarc_demo.json", out, resolved);
    return report.dest_trial_errors == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-region laboratory and coding-scheme simulator for "
                 "multiple-access relay channels"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs args;
    std::string theorem = "1", fading_check = "df", scheme = "sep";

    auto* region = app.add_subcommand("region", "evaluate achievability conditions");
    add_common(region, args);
    region->add_option("--theorem", theorem, "1, 6, 7, or crbc");

    auto* outer = app.add_subcommand("outer", "evaluate necessary conditions (search)");
    add_common(outer, args);
    outer->add_option("--theorem", theorem, "2 or 3");

    auto* fading = app.add_subcommand("fading", "fading separation-optimality evaluators");
    add_common(fading, args);
    fading->add_option("--check", fading_check, "df, region, or separation");

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo coding-scheme runs");
    add_common(simulate, args);
    simulate->add_option("--scheme", scheme, "sep, cpm-a, or cpm-b");

    auto* demo = app.add_subcommand("somarc-demo", "zero-error example and its MAC bound");
    add_common(demo, args);
    demo->get_option("--trials")->default_val(100000);

    CLI11_PARSE(app, argc, argv);

    try {
        if (region->parsed()) return run_region(args, theorem);
        if (outer->parsed()) return run_outer(args, theorem);
        if (fading->parsed()) return run_fading(args, fading_check);
        if (simulate->parsed())
            return run_simulate(args, scheme,
                                simulate->get_option("--epsilon")->count() > 0);
        if (demo->parsed()) return run_somarc_demo(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
