// Python extension: configs, results and reports cross the boundary as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include <json.hpp>

#include "mec/config.hpp"
#include "mec/engine.hpp"
#include "mec/io.hpp"
#include "mec/metrics.hpp"
#include "mec/oracles.hpp"
#include "mec/solver.hpp"
#include "mec/sweep.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

mec::SystemConfig load(const std::string& config_json) {
    auto cfg = mec::config_from_json(json::parse(config_json));
    cfg.validate();
    return cfg;
}

std::string default_config_json(std::size_t n_devices, std::size_t n_cores) {
    return mec::config_to_json(mec::default_config(n_devices, n_cores)).dump();
}

std::string run_json(const std::string& config_json, const std::string& mode, std::uint64_t n_slots,
                     std::uint64_t warmup, bool trace) {
    const auto cfg = load(config_json);
    mec::RunOptions opts;
    opts.mode = mec::parse_mode(mode);
    opts.n_slots = n_slots;
    opts.warmup_slots = warmup;
    opts.keep_trace = trace;
    mec::RunResult result;
    {
        py::gil_scoped_release release;
        result = mec::run(cfg, opts);
    }
    auto doc = mec::run_report_json(cfg, opts, result, {});
    if (trace) {
        std::ostringstream csv;
        mec::write_trace_csv(csv, result.trace);
        doc["trace_csv"] = csv.str();
    }
    json summaries = json::array();
    for (const auto& s : result.summaries)
        summaries.push_back({s.sum_q_bits, s.sum_t_act_bits, s.sum_t_vir_bits, s.weighted_power_w});
    doc["slot_summaries"] = std::move(summaries);
    return doc.dump();
}

std::string sweep_csv(const std::string& config_json, const std::vector<double>& v_values,
                      const std::vector<std::string>& modes, const std::vector<std::uint64_t>& seeds,
                      const std::vector<double>& server_weights, std::uint64_t n_slots, unsigned threads) {
    const auto cfg = load(config_json);
    mec::SweepSpec spec;
    spec.v_values = v_values;
    for (const auto& m : modes) spec.modes.push_back(mec::parse_mode(m));
    spec.seeds = seeds;
    spec.server_weights = server_weights;
    spec.n_slots = n_slots;
    std::vector<mec::SweepRow> rows;
    {
        py::gil_scoped_release release;
        rows = mec::run_sweep(cfg, spec, threads);
    }
    std::ostringstream out;
    mec::write_sweep_csv(out, rows);
    return out.str();
}

std::string verify_json(const std::string& suite, std::size_t n_cases, std::uint64_t seed, double perturb) {
    mec::VerifyOptions opts;
    opts.seed = seed;
    opts.perturb = perturb;
    json out = json::array();
    for (auto s : mec::parse_suites(suite)) {
        std::vector<mec::OracleReport> reports;
        {
            py::gil_scoped_release release;
            reports = mec::verify_suite(s, n_cases, opts);
        }
        for (const auto& r : reports) out.push_back(mec::to_json(r));
    }
    return out.dump();
}

std::string solve_per_slot_json(const std::string& config_json, const std::vector<double>& q,
                                const std::vector<double>& t, const std::vector<double>& gamma) {
    const auto cfg = load(config_json);
    const std::size_t n = cfg.n_devices();
    if (q.size() != n || t.size() != n || gamma.size() != n)
        throw std::invalid_argument("solve_per_slot: q, t and gamma need one entry per device");
    const mec::QueueState state{q, t};
    const mec::SlotEnvironment env{gamma, std::vector<double>(n, 0.0)};
    const auto sol = mec::solve_per_slot(state, env, cfg);
    return json{{"f_hz", sol.decision.f_hz},
                {"p_tx_w", sol.decision.p_tx_w},
                {"alpha", sol.decision.alpha},
                {"f_c_hz", sol.decision.f_c_hz},
                {"d_s_bits", sol.decision.d_s_bits},
                {"objective", mec::per_slot_objective(state, env, sol.decision, cfg)},
                {"gs_iterations", sol.trace.iterations},
                {"gs_converged", sol.trace.converged}}
        .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Edge offloading simulator core";

    py::register_exception<mec::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("default_config_json", &default_config_json, py::arg("n_devices") = 5, py::arg("n_cores") = 8);
    m.def("normalize_config_json", [](const std::string& s) { return mec::config_to_json(load(s)).dump(); });
    m.def("config_hash", [](const std::string& s) { return mec::config_hash(load(s)); });
    m.def("drift_constant", [](const std::string& s) { return mec::drift_constant_c(load(s)); });
    m.def("run_json", &run_json, py::arg("config_json"), py::arg("mode") = "baseline", py::arg("n_slots") = 10000,
          py::arg("warmup") = 0, py::arg("trace") = false);
    m.def("sweep_csv", &sweep_csv, py::arg("config_json"), py::arg("v_values"), py::arg("modes"), py::arg("seeds"),
          py::arg("server_weights"), py::arg("n_slots") = 10000, py::arg("threads") = 1);
    m.def("verify_json", &verify_json, py::arg("suite") = "all", py::arg("n_cases") = 100, py::arg("seed") = 1,
          py::arg("perturb") = 0.0);
    m.def("solve_per_slot_json", &solve_per_slot_json, py::arg("config_json"), py::arg("q_bits"),
          py::arg("t_bits"), py::arg("gamma"));
    m.def("update_local_queue", &mec::update_local_queue, py::arg("q"), py::arg("d_sigma"), py::arg("a"));
    m.def("update_server_queue", &mec::update_server_queue, py::arg("t"), py::arg("d_s"), py::arg("q"),
          py::arg("d_l"), py::arg("d_r"));
}
