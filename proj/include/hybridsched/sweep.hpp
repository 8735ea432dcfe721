#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hybridsched/bff.hpp"
#include "hybridsched/demand.hpp"
#include "hybridsched/eclipse.hpp"
#include "hybridsched/io.hpp"
#include "hybridsched/stats.hpp"
#include "hybridsched/twohop.hpp"
#include "hybridsched/validate.hpp"

namespace hybridsched {

inline SearchStrategy strategy_from_stride(int stride) {
    // 0 selects the peak search; stride >= 1 scans sampled order statistics
    // (stride 1 being the exhaustive scan)
    return stride == 0 ? SearchStrategy::bitonic() : SearchStrategy::sampled(stride);
}

inline std::string strategy_label(int stride) {
    if (stride == 0) return "bitonic";
    if (stride == 1) return "full";
    return "sampled-" + std::to_string(stride);
}

struct ExperimentConfig {
    std::vector<std::string> algorithms{"eclipse", "twohop", "bff"};
    int n = 100;
    int runs = 1;
    std::uint64_t base_seed = 1;
    std::vector<double> deltas{0.01};
    std::vector<double> ratios{10.0};                  // r_c / r_p
    std::vector<std::pair<int, int>> flows{{4, 12}};   // (large, medium) per row
    std::vector<double> small_shares{0.3};             // share carried by medium flows
    std::vector<int> strides{0};
    bool noise = true;
    bool record_wall_time = true;  // off gives byte-identical output files
    std::string output = "results";
    int workers = 0;  // 0 = hardware concurrency
};

inline void check_experiment(const ExperimentConfig& cfg) {
    if (cfg.algorithms.empty()) throw std::invalid_argument("sweep: no algorithms");
    for (const std::string& a : cfg.algorithms)
        if (a != "eclipse" && a != "twohop" && a != "bff")
            throw std::invalid_argument("sweep: unknown algorithm '" + a + "'");
    if (cfg.runs < 1) throw std::invalid_argument("sweep: runs must be >= 1");
    if (cfg.n < 2) throw std::invalid_argument("sweep: n must be >= 2");
    if (cfg.deltas.empty() || cfg.ratios.empty() || cfg.flows.empty() || cfg.small_shares.empty() ||
        cfg.strides.empty())
        throw std::invalid_argument("sweep: empty grid dimension");
}

struct SingleRun {
    RunResult metrics;
    ValidationReport report;
    json schedule_json;
    std::string ledger_jsonl;  // twohop only
};

/// Run one algorithm on one demand matrix; wall time covers the scheduler
/// call only.
inline SingleRun run_single(const std::string& algorithm, const DemandMatrix& demand, const SystemParams& params,
                            const SearchStrategy& strategy = {}) {
    SingleRun out;
    out.metrics.algorithm = algorithm;
    out.metrics.delta = params.delta;
    out.metrics.rate_ratio = 1.0 / params.packet_rate;
    auto t0 = std::chrono::steady_clock::now();
    if (algorithm == "eclipse") {
        EclipseResult r = eclipse_schedule(demand, params, strategy);
        out.metrics.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.metrics.total_time = r.total_time;
        out.metrics.configurations = r.schedule.num_steps();
        out.report = validate(demand, r.schedule, params);
        out.schedule_json = schedule_to_json(r.schedule);
    } else if (algorithm == "twohop") {
        TwoHopResult r = two_hop_schedule(demand, params, strategy);
        out.metrics.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.metrics.total_time = r.total_time;
        out.metrics.configurations = r.schedule.num_steps();
        out.report = validate(demand, r.schedule, r.ledger, params);
        out.schedule_json = schedule_to_json(r.schedule);
        std::ostringstream ss;
        ledger_to_jsonl(ss, r.ledger);
        out.ledger_jsonl = ss.str();
    } else if (algorithm == "bff") {
        BffResult r = bff_schedule(demand, params);
        out.metrics.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.metrics.total_time = r.total_time;
        out.metrics.configurations = static_cast<int>(r.schedule.connections.size());
        out.report = validate(demand, r.schedule, params);
        out.schedule_json = event_schedule_to_json(r.schedule);
    } else {
        throw std::invalid_argument("run_single: unknown algorithm '" + algorithm + "'");
    }
    return out;
}

struct SweepCell {
    double delta = 0.0;
    double ratio = 0.0;
    int num_large = 0;
    int num_medium = 0;
    double small_share = 0.0;
    int stride = 0;
};

struct SweepOutput {
    std::vector<RunResult> rows;  // cell-major, algorithms innermost
    json summary;
    int violation_count = 0;
    std::string csv_path;
    std::string summary_path;
};

/// Run the full grid. Cells and runs execute on a bounded worker pool; rows
/// and summaries come out in deterministic grid order regardless of
/// completion order. Algorithms within a (cell, seed) pair share the demand
/// matrix.
inline SweepOutput run_sweep(const ExperimentConfig& cfg) {
    check_experiment(cfg);

    std::vector<SweepCell> cells;
    for (double delta : cfg.deltas)
        for (double ratio : cfg.ratios)
            for (auto [large, medium] : cfg.flows)
                for (double small_share : cfg.small_shares)
                    for (int stride : cfg.strides) cells.push_back({delta, ratio, large, medium, small_share, stride});

    struct Task {
        std::size_t cell;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int r = 0; r < cfg.runs; ++r) tasks.push_back({c, r});

    const std::size_t algs = cfg.algorithms.size();
    SweepOutput out;
    out.rows.resize(tasks.size() * algs);
    std::vector<ValidationReport> reports(tasks.size() * algs);

    auto run_task = [&](const Task& task) {
        const SweepCell& cell = cells[task.cell];
        TrafficGenConfig gen;
        gen.n = cfg.n;
        gen.num_large = cell.num_large;
        gen.num_medium = cell.num_medium;
        gen.load_medium = cell.small_share;
        gen.load_large = 1.0 - cell.small_share;
        gen.flow_noise = cfg.noise;
        gen.mice_noise = cfg.noise;
        gen.seed = cfg.base_seed + static_cast<std::uint64_t>(task.run);
        DemandMatrix demand = generate_demand(gen);
        SystemParams params = SystemParams::from_ratio(cfg.n, cell.delta, cell.ratio);
        SearchStrategy strategy = strategy_from_stride(cell.stride);
        for (std::size_t a = 0; a < algs; ++a) {
            SingleRun run = run_single(cfg.algorithms[a], demand, params, strategy);
            run.metrics.seed = gen.seed;
            if (!cfg.record_wall_time) run.metrics.wall_ms = 0.0;
            std::size_t idx = (task.cell * static_cast<std::size_t>(cfg.runs) + task.run) * algs + a;
            out.rows[idx] = std::move(run.metrics);
            reports[idx] = std::move(run.report);
        }
    };

    unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, tasks.size() ? tasks.size() : 1);
    if (workers <= 1) {
        for (const Task& t : tasks) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t k = next.fetch_add(1);
                    if (k >= tasks.size()) return;
                    run_task(tasks[k]);
                }
            });
        for (std::thread& t : pool) t.join();
    }

    for (const ValidationReport& r : reports) out.violation_count += static_cast<int>(r.violations.size());

    json cells_json = json::array();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const SweepCell& cell = cells[c];
        json cell_json{{"delta", cell.delta},
                       {"ratio", cell.ratio},
                       {"n_large", cell.num_large},
                       {"n_medium", cell.num_medium},
                       {"c_small", cell.small_share},
                       {"search", strategy_label(cell.stride)}};
        json per_alg = json::object();
        for (std::size_t a = 0; a < algs; ++a) {
            std::vector<double> times;
            for (int r = 0; r < cfg.runs; ++r)
                times.push_back(out.rows[(c * cfg.runs + r) * algs + a].total_time);
            per_alg[cfg.algorithms[a]] = summary_to_json(summarize(std::move(times)));
        }
        cell_json["algorithms"] = std::move(per_alg);
        cells_json.push_back(std::move(cell_json));
    }
    out.summary = {{"n", cfg.n}, {"runs", cfg.runs}, {"base_seed", cfg.base_seed}, {"cells", std::move(cells_json)}};

    std::ostringstream csv;
    csv << kResultCsvHeader << "\n";
    for (const RunResult& row : out.rows) append_result_csv(csv, row);
    out.csv_path = cfg.output + ".csv";
    out.summary_path = cfg.output + "_summary.json";
    write_text_file(out.csv_path, csv.str());
    write_text_file(out.summary_path, out.summary.dump(2) + "\n");
    return out;
}

}  // namespace hybridsched
