// mecsim: single runs, V sweeps and oracle verification from the command line.
//
// Exit codes: 0 success, 1 config error, 2 oracle failure, 3 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mec/config.hpp"
#include "mec/engine.hpp"
#include "mec/io.hpp"
#include "mec/oracles.hpp"
#include "mec/sweep.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitOracle = 2;
constexpr int kExitRuntime = 3;

struct ConfigSource {
    std::string path;
    std::vector<std::string> overrides;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--config", path, "JSON config file (defaults to the built-in setup)");
        cmd->add_option("--set", overrides, "Dotted-key override such as control_v=3e9 (repeatable)");
    }

    mec::SystemConfig load() const {
        nlohmann::json doc = nlohmann::json::object();
        if (!path.empty()) {
            std::ifstream in(path);
            if (!in) throw mec::ConfigError("config", "cannot open " + path);
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw mec::ConfigError("config", std::string("malformed JSON: ") + e.what());
            }
        }
        for (const auto& o : overrides) mec::apply_override(doc, o);
        auto cfg = mec::config_from_json(doc);
        cfg.validate();
        return cfg;
    }
};

// Opens `path` for writing, or returns stdout for "" and "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

int cmd_run(const ConfigSource& src, const std::string& mode, std::uint64_t slots, std::uint64_t warmup,
            const std::string& out_path, const std::string& trace_path, std::optional<double> p_opt) {
    const auto cfg = src.load();
    mec::RunOptions opts;
    opts.mode = mec::parse_mode(mode);
    opts.n_slots = slots;
    opts.warmup_slots = warmup;
    opts.keep_trace = !trace_path.empty();
    const auto result = mec::run(cfg, opts);

    mec::RunProvenance prov{src.overrides, p_opt, mec::utc_timestamp()};
    Output out(out_path);
    out.stream() << mec::run_report_json(cfg, opts, result, prov).dump(2) << '\n';
    if (opts.keep_trace) {
        Output trace(trace_path);
        mec::write_trace_csv(trace.stream(), result.trace);
    }
    return 0;
}

int cmd_sweep(const ConfigSource& src, const std::vector<double>& v_values, const std::vector<std::string>& modes,
              const std::vector<std::uint64_t>& seeds, const std::vector<double>& weights, std::uint64_t slots,
              unsigned threads, const std::string& out_path) {
    const auto cfg = src.load();
    mec::SweepSpec spec;
    spec.v_values = v_values;
    for (const auto& m : modes) spec.modes.push_back(mec::parse_mode(m));
    spec.seeds = seeds;
    spec.server_weights = weights;
    spec.n_slots = slots;
    const auto rows = mec::run_sweep(cfg, spec, threads);
    Output out(out_path);
    mec::write_sweep_csv(out.stream(), rows);
    return 0;
}

int cmd_verify(const std::string& suite_name, std::optional<std::size_t> cases, std::uint64_t seed, double perturb,
               unsigned threads, const std::string& out_path) {
    mec::VerifyOptions opts;
    opts.seed = seed;
    opts.perturb = perturb;
    opts.threads = threads;
    Output out(out_path);
    std::size_t failures = 0;
    for (auto suite : mec::parse_suites(suite_name)) {
        const std::size_t n = cases.value_or(mec::default_case_count(suite));
        const auto reports = mec::verify_suite(suite, n, opts);
        std::size_t suite_failures = 0;
        for (const auto& r : reports) {
            out.stream() << mec::to_json(r).dump() << '\n';
            if (!r.pass) ++suite_failures;
        }
        std::cerr << mec::to_string(suite) << ": " << reports.size() - suite_failures << "/" << reports.size()
                  << " passed\n";
        failures += suite_failures;
    }
    return failures == 0 ? 0 : kExitOracle;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-user edge offloading simulator"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Simulate one configuration and write a metrics JSON document");
    ConfigSource run_src;
    run_src.add_options(run);
    std::string run_mode = "baseline";
    std::uint64_t run_slots = 10000;
    std::uint64_t run_warmup = 0;
    std::string run_out;
    std::string run_trace;
    std::optional<double> run_p_opt;
    run->add_option("--mode", run_mode, "baseline | delay_improved | equal_bandwidth");
    run->add_option("--slots", run_slots, "Number of slots")->check(CLI::PositiveNumber);
    run->add_option("--warmup", run_warmup, "Slots excluded from the post-warm-up metrics");
    run->add_option("--out", run_out, "Metrics JSON path (stdout by default)");
    run->add_option("--trace", run_trace, "Per-slot trace CSV path");
    run->add_option("--p-opt", run_p_opt, "Proxy for the optimal power, enables the power bound");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a grid of V / mode / seed / server weight values");
    ConfigSource sweep_src;
    sweep_src.add_options(sweep);
    std::vector<double> sweep_v{1e6, 1e7, 1e8, 1e9, 3e9, 7e9};
    std::vector<std::string> sweep_modes{"baseline", "delay_improved"};
    std::vector<std::uint64_t> sweep_seeds{1};
    std::vector<double> sweep_w{0.0};
    std::uint64_t sweep_slots = 10000;
    unsigned sweep_threads = default_threads();
    std::string sweep_out;
    sweep->add_option("--v", sweep_v, "Control parameter values")->delimiter(',');
    sweep->add_option("--modes", sweep_modes, "Modes")->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "Seeds")->delimiter(',');
    sweep->add_option("--w-server", sweep_w, "Server weights")->delimiter(',');
    sweep->add_option("--slots", sweep_slots, "Slots per run")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", sweep_threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "CSV path (stdout by default)");

    // verify
    auto* verify = app.add_subcommand("verify", "Compare the solvers against brute-force oracles");
    std::string verify_suite = "all";
    std::optional<std::size_t> verify_cases;
    std::uint64_t verify_seed = 1;
    double verify_perturb = 0.0;
    unsigned verify_threads = default_threads();
    std::string verify_out;
    verify->add_option("--suite", verify_suite, "sp1 | pwr | sp2 | sp3 | zero_power | all");
    verify->add_option("--cases", verify_cases, "Cases per suite (suite default otherwise)");
    verify->add_option("--seed", verify_seed, "Instance seed");
    verify->add_option("--perturb", verify_perturb, "Test hook: scale closed forms by (1 - perturb)")
        ->check(CLI::Range(0.0, 1.0));
    verify->add_option("--threads", verify_threads, "Worker threads")->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_out, "JSON lines path (stdout by default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_src, run_mode, run_slots, run_warmup, run_out, run_trace, run_p_opt);
        if (*sweep)
            return cmd_sweep(sweep_src, sweep_v, sweep_modes, sweep_seeds, sweep_w, sweep_slots, sweep_threads,
                             sweep_out);
        if (*verify)
            return cmd_verify(verify_suite, verify_cases, verify_seed, verify_perturb, verify_threads, verify_out);
    } catch (const mec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
