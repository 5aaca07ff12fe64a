#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "branchwalk/config.hpp"
#include "branchwalk/report.hpp"
#include "branchwalk/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerification = 2;
constexpr int kExitBudget = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::vector<long long> n_override;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* c = cmd->add_option("--config", args.config_path, "scenario config (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "root seed override")->each([&](std::string) {
        args.seed_set = true;
    });
    cmd->add_option("--threads", args.threads, "worker threads");
    cmd->add_option("--n-override", args.n_override, "replace the scaling n list")
        ->delimiter(',');
}

branchwalk::ScenarioConfig load(const CommonArgs& args) {
    branchwalk::ScenarioConfig cfg = branchwalk::load_config(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    if (args.threads > 0) cfg.threads = args.threads;
    if (!args.n_override.empty()) cfg.n_values = args.n_override;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    return cfg;
}

std::string default_fixture_dir(const char* argv0) {
    namespace fs = std::filesystem;
    fs::path exe(argv0);
    for (fs::path base : {exe.parent_path(), exe.parent_path().parent_path(), fs::path(".")}) {
        fs::path cand = base / "fixtures";
        if (fs::exists(cand / "golden_walks.json")) return cand.string();
    }
#ifdef BRANCHWALK_FIXTURE_DIR
    return BRANCHWALK_FIXTURE_DIR;
#else
    return "fixtures";
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branchwalk: exact multitype birth-death-mutation simulation on trait graphs\n"
                 "with power-law mutation scaling, plus first-order asymptotic predictions"};
    app.require_subcommand(1);

    CommonArgs analyze_args, exponents_args, simulate_args, ensemble_args, verify_args;
    std::string fixture_dir;

    auto* analyze = app.add_subcommand("analyze", "walk tables, admissible sets, exact weights");
    add_common(analyze, analyze_args, true);
    auto* exponents =
        app.add_subcommand("exponents", "limiting exponent functions and the event log");
    add_common(exponents, exponents_args, true);
    auto* simulate = app.add_subcommand("simulate", "one exact stochastic trajectory");
    add_common(simulate, simulate_args, true);
    auto* ensemble = app.add_subcommand("ensemble", "replicate ensemble with statistics");
    add_common(ensemble, ensemble_args, true);
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    add_common(verify, verify_args, false);
    verify->add_option("--fixtures", fixture_dir, "fixture directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            auto cfg = load(analyze_args);
            branchwalk::write_analyze_report(cfg, cfg.out_dir);
            branchwalk::write_manifest(cfg, cfg.out_dir, "analyze", kExitOk, false);
            std::cout << "analyze: wrote " << cfg.out_dir << "/analyze.json\n";
            return kExitOk;
        }
        if (exponents->parsed()) {
            auto cfg = load(exponents_args);
            branchwalk::write_exponents_report(cfg, cfg.out_dir);
            branchwalk::write_manifest(cfg, cfg.out_dir, "exponents", kExitOk, false);
            std::cout << "exponents: wrote " << cfg.out_dir << "/exponents.json\n";
            return kExitOk;
        }
        if (simulate->parsed()) {
            auto cfg = load(simulate_args);
            auto scaling = branchwalk::make_scaling_for_config(cfg, cfg.n_values.front());
            branchwalk::Rng rng = branchwalk::replicate_stream(cfg.seed, 0);
            branchwalk::Trajectory traj =
                branchwalk::run(cfg.graph, scaling, branchwalk::to_run_config(cfg), rng);
            branchwalk::write_simulation_report(cfg, traj, cfg.out_dir);
            int code = traj.budget_exceeded ? kExitBudget : kExitOk;
            branchwalk::write_manifest(cfg, cfg.out_dir, "simulate", code,
                                       traj.budget_exceeded);
            std::cout << "simulate: " << traj.events << " events, wrote " << cfg.out_dir
                      << "/simulation.json\n";
            return code;
        }
        if (ensemble->parsed()) {
            auto cfg = load(ensemble_args);
            branchwalk::EnsembleStats stats =
                branchwalk::run_ensemble(branchwalk::to_ensemble_config(cfg));
            branchwalk::write_ensemble_report(cfg, stats, cfg.out_dir);
            bool overflow = false;
            for (const auto& m : stats.meta) overflow |= m.budget_exceeded;
            int code = overflow ? kExitBudget : kExitOk;
            branchwalk::write_manifest(cfg, cfg.out_dir, "ensemble", code, overflow);
            std::cout << "ensemble: " << stats.rows.size() << " observation rows, wrote "
                      << cfg.out_dir << "/ensemble.csv\n";
            return code;
        }
        if (verify->parsed()) {
            branchwalk::VerifyOptions vo;
            vo.fixture_dir = fixture_dir.empty() ? default_fixture_dir(argv[0]) : fixture_dir;
            vo.threads = verify_args.threads > 0 ? verify_args.threads : 2;
            vo.progress = &std::cout;
            auto results = branchwalk::run_acceptance(vo);
            bool ok = branchwalk::all_passed(results);
            if (!verify_args.out_dir.empty()) {
                std::ostringstream os;
                os << "{\n  \"criteria\": [\n";
                for (size_t i = 0; i < results.size(); ++i) {
                    const auto& r = results[i];
                    os << "    {\"id\": " << r.id << ", \"name\": \"" << r.name
                       << "\", \"pass\": " << (r.pass ? "true" : "false")
                       << ", \"seconds\": " << r.seconds << "}"
                       << (i + 1 < results.size() ? "," : "") << "\n";
                }
                os << "  ],\n  \"all_passed\": " << (ok ? "true" : "false") << "\n}\n";
                std::filesystem::create_directories(verify_args.out_dir);
                std::ofstream f(verify_args.out_dir + "/verify.json");
                f << os.str();
            }
            std::cout << (ok ? "verify: all criteria passed\n"
                             : "verify: at least one criterion failed\n");
            return ok ? kExitOk : kExitVerification;
        }
    } catch (const branchwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
