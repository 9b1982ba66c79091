#include "cascadelab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "cascadelab/csv.hpp"
#include "cascadelab/error.hpp"
#include "cascadelab/netgen.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

namespace {

constexpr std::uint64_t kRunTag = 0x72756e;    // "run"
constexpr std::uint64_t kGraphTag = 0x677270;  // "grp"

}  // namespace

SweepGrid SweepGrid::paper_grid() {
    SweepGrid g;
    g.policies = {SeedPolicy::RandomAll, SeedPolicy::RandomGroup, SeedPolicy::TopCentrality};
    g.group_ratios = {0.01, 0.03, 0.05};
    g.seed_counts = {15, 25, 35};
    g.p0_values = {0.01, 0.05, 0.10};
    g.c_values = {1.5, 3.0, 4.5};
    g.replicates = 20;
    g.n = 10'000;
    return g;
}

void SweepGrid::validate() const {
    if (policies.empty() || group_ratios.empty() || seed_counts.empty() || p0_values.empty() || c_values.empty()) {
        throw ParameterError("sweep grid lists must be non-empty");
    }
    if (replicates == 0) throw ParameterError("replicates must be >= 1");
    for (double r : group_ratios) {
        GenParams{n, m_attach, r, q_intra, 0}.validate();
    }
    for (double p0 : p0_values) {
        for (double c : c_values) {
            CascadeParams cp;
            cp.p0 = p0;
            cp.c = c;
            cp.p_floor = p_floor;
            cp.max_steps = max_steps;
            cp.validate();
        }
    }
    for (std::size_t k : seed_counts) {
        if (k == 0 || k > n) throw ParameterError("seed counts must be in [1, n]");
    }
}

std::size_t SweepGrid::cell_count() const {
    return policies.size() * group_ratios.size() * seed_counts.size() * p0_values.size() * c_values.size();
}

SweepCell cell_at(const SweepGrid& grid, std::size_t index) {
    SweepCell cell;
    cell.index = index;
    std::size_t rest = index;
    const std::size_t ci = rest % grid.c_values.size();
    rest /= grid.c_values.size();
    const std::size_t pi = rest % grid.p0_values.size();
    rest /= grid.p0_values.size();
    const std::size_t si = rest % grid.seed_counts.size();
    rest /= grid.seed_counts.size();
    const std::size_t ri = rest % grid.group_ratios.size();
    rest /= grid.group_ratios.size();
    cell.policy = grid.policies.at(rest);
    cell.ratio_index = ri;
    cell.r = grid.group_ratios[ri];
    cell.seed_count = grid.seed_counts[si];
    cell.p0 = grid.p0_values[pi];
    cell.c = grid.c_values[ci];
    return cell;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t cell_index, std::size_t replicate) {
    return mix_seed(base_seed, {kRunTag, cell_index, replicate});
}

std::uint64_t graph_seed(std::uint64_t base_seed, std::size_t ratio_index, std::size_t replicate) {
    return mix_seed(base_seed, {kGraphTag, ratio_index, replicate});
}

SweepResult run_sweep(const SweepGrid& grid, std::size_t jobs, const SweepProgress& progress) {
    grid.validate();
    const std::size_t cells = grid.cell_count();
    const std::size_t reps = grid.replicates;

    // cells grouped by ratio: one network per (ratio, replicate) serves them all
    std::vector<std::vector<SweepCell>> by_ratio(grid.group_ratios.size());
    for (std::size_t i = 0; i < cells; ++i) {
        SweepCell cell = cell_at(grid, i);
        by_ratio[cell.ratio_index].push_back(cell);
    }
    const bool need_centrality =
        std::find(grid.policies.begin(), grid.policies.end(), SeedPolicy::TopCentrality) != grid.policies.end();

    SweepResult result;
    result.rows.resize(cells * reps);
    const std::size_t units = grid.group_ratios.size() * reps;
    std::atomic<std::size_t> next_unit{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t unit = next_unit.fetch_add(1);
            if (unit >= units) return;
            const std::size_t ri = unit / reps;
            const std::size_t rep = unit % reps;

            GenParams gen{grid.n, grid.m_attach, grid.group_ratios[ri], grid.q_intra, graph_seed(grid.base_seed, ri, rep)};
            const Graph graph = generate_network(gen);
            std::vector<double> centrality;
            std::optional<std::string> centrality_error;
            if (need_centrality) {
                try {
                    centrality = eigenvector_centrality(graph);
                } catch (const ConvergenceError& e) {
                    centrality_error = e.what();
                }
            }

            for (const SweepCell& cell : by_ratio[ri]) {
                SweepRow& row = result.rows[cell.index * reps + rep];
                row.cell = cell;
                row.replicate = rep;
                row.run_seed = run_seed(grid.base_seed, cell.index, rep);
                if (cell.policy == SeedPolicy::TopCentrality && centrality_error) {
                    row.error = *centrality_error;
                    continue;
                }
                CascadeParams params;
                params.p0 = cell.p0;
                params.c = cell.c;
                params.seed_count = cell.seed_count;
                params.policy = cell.policy;
                params.max_steps = grid.max_steps;
                params.p_floor = grid.p_floor;
                params.stop_rule = grid.stop_rule;
                params.rng_seed = row.run_seed;
                try {
                    const CascadeTrace trace =
                        need_centrality ? simulate(graph, params, std::span<const double>(centrality))
                                        : simulate(graph, params);
                    row.exposed = trace.exposed_count;
                    row.final_step = trace.final_step;
                    row.truncated = trace.truncated;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
            }
            const std::size_t finished = done.fetch_add(1) + 1;
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(finished, units);
            }
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, units));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    }

    result.cell_summaries = summarize_cells(grid, result.rows);
    return result;
}

std::vector<CellSummary> summarize_cells(const SweepGrid& grid, const std::vector<SweepRow>& rows) {
    const std::size_t cells = grid.cell_count();
    std::vector<CellSummary> out(cells);
    std::vector<std::vector<double>> values(cells);
    for (std::size_t i = 0; i < cells; ++i) out[i].cell = cell_at(grid, i);
    for (const SweepRow& row : rows) {
        CellSummary& s = out.at(row.cell.index);
        if (row.failed()) {
            if (!s.error) s.error = row.error;
            continue;
        }
        values[row.cell.index].push_back(static_cast<double>(row.exposed));
    }
    for (std::size_t i = 0; i < cells; ++i) {
        out[i].runs = values[i].size();
        out[i].mean_exposed = mean(values[i]);
        out[i].std_exposed = sample_stddev(values[i]);
    }
    return out;
}

namespace {

std::vector<std::string> cell_fields(const SweepCell& cell) {
    return {std::string(to_string(cell.policy)), csv::format_double(cell.r), std::to_string(cell.seed_count),
            csv::format_double(cell.p0), csv::format_double(cell.c)};
}

}  // namespace

void write_rows_csv(std::ostream& out, const SweepResult& result) {
    out << "policy,r,seed_count,p0,c,replicate,run_seed,exposed,final_step\n";
    for (const SweepRow& row : result.rows) {
        auto fields = cell_fields(row.cell);
        fields.push_back(std::to_string(row.replicate));
        fields.push_back(std::to_string(row.run_seed));
        fields.push_back(row.failed() ? "" : std::to_string(row.exposed));
        fields.push_back(row.failed() ? "" : std::to_string(row.final_step));
        csv::write_row(out, fields);
    }
}

void write_summary_csv(std::ostream& out, const SweepResult& result) {
    out << "policy,r,seed_count,p0,c,runs,mean_exposed,std_exposed,status\n";
    for (const CellSummary& s : result.cell_summaries) {
        auto fields = cell_fields(s.cell);
        fields.push_back(std::to_string(s.runs));
        fields.push_back(csv::format_double(s.mean_exposed));
        fields.push_back(csv::format_double(s.std_exposed));
        fields.push_back(s.error ? "failed: " + *s.error : "ok");
        csv::write_row(out, fields);
    }
}

namespace {

using ComboKey = std::tuple<double, std::size_t, double, double>;  // r, seed_count, p0, c

struct PolicySums {
    double sum[3] = {0.0, 0.0, 0.0};
    std::size_t count[3] = {0, 0, 0};
    bool failed[3] = {false, false, false};
};

std::size_t slot(SeedPolicy p) { return static_cast<std::size_t>(p); }

PolicyRatioRow finish_row(std::string scope, const double sum[3], const std::size_t count[3], std::size_t cells) {
    PolicyRatioRow row;
    row.scope = std::move(scope);
    row.mean_random = sum[0] / static_cast<double>(count[0]);
    row.mean_group = sum[1] / static_cast<double>(count[1]);
    row.mean_centrality = sum[2] / static_cast<double>(count[2]);
    row.group_over_random = row.mean_group / row.mean_random;
    row.centrality_over_random = row.mean_centrality / row.mean_random;
    row.cells = cells;
    return row;
}

}  // namespace

PolicyRatioTable summarize_policy_ratios(const SweepResult& result) {
    std::map<ComboKey, PolicySums> combos;
    for (const SweepRow& row : result.rows) {
        PolicySums& s = combos[{row.cell.r, row.cell.seed_count, row.cell.p0, row.cell.c}];
        const std::size_t k = slot(row.cell.policy);
        if (row.failed()) {
            s.failed[k] = true;
            continue;
        }
        s.sum[k] += static_cast<double>(row.exposed);
        ++s.count[k];
    }

    PolicyRatioTable table;
    std::map<std::size_t, PolicySums> by_seed;
    PolicySums overall;
    std::map<std::size_t, std::size_t> cells_per_seed;
    std::size_t overall_cells = 0;

    for (const auto& [key, s] : combos) {
        const auto [r, k, p0, c] = key;
        std::string missing;
        for (SeedPolicy p : {SeedPolicy::RandomAll, SeedPolicy::RandomGroup, SeedPolicy::TopCentrality}) {
            const std::size_t i = slot(p);
            if (s.failed[i] || s.count[i] == 0) {
                if (!missing.empty()) missing += ' ';
                missing += std::string(to_string(p)) + (s.failed[i] ? "(failed)" : "(missing)");
            }
        }
        if (!missing.empty()) {
            table.excluded.push_back("r=" + csv::format_double(r) + " seed_count=" + std::to_string(k) +
                                     " p0=" + csv::format_double(p0) + " c=" + csv::format_double(c) + ": " + missing);
            continue;
        }
        PolicyRatioRow row = finish_row("cell", s.sum, s.count, 1);
        row.seed_count = k;
        row.r = r;
        row.p0 = p0;
        row.c = c;
        table.by_cell.push_back(row);

        PolicySums& bs = by_seed[k];
        for (std::size_t i = 0; i < 3; ++i) {
            bs.sum[i] += s.sum[i];
            bs.count[i] += s.count[i];
            overall.sum[i] += s.sum[i];
            overall.count[i] += s.count[i];
        }
        ++cells_per_seed[k];
        ++overall_cells;
    }

    for (const auto& [k, s] : by_seed) {
        PolicyRatioRow row = finish_row("seed_count", s.sum, s.count, cells_per_seed[k]);
        row.seed_count = k;
        table.by_seed_count.push_back(row);
    }
    if (overall_cells > 0) {
        table.overall = finish_row("overall", overall.sum, overall.count, overall_cells);
    } else {
        table.overall.scope = "overall";
    }
    return table;
}

void write_ratio_csv(std::ostream& out, const PolicyRatioTable& table) {
    out << "scope,seed_count,r,p0,c,mean_random,mean_group,mean_centrality,group_over_random,"
           "centrality_over_random,cells\n";
    auto opt = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); };
    auto emit = [&](const PolicyRatioRow& row) {
        csv::write_row(out, {row.scope, row.seed_count ? std::to_string(*row.seed_count) : "", opt(row.r), opt(row.p0),
                             opt(row.c), csv::format_double(row.mean_random), csv::format_double(row.mean_group),
                             csv::format_double(row.mean_centrality), csv::format_double(row.group_over_random),
                             csv::format_double(row.centrality_over_random), std::to_string(row.cells)});
    };
    for (const auto& row : table.by_seed_count) emit(row);
    if (table.overall.cells > 0) emit(table.overall);
    for (const auto& row : table.by_cell) emit(row);
    for (const auto& note : table.excluded) out << "# excluded " << note << '\n';
}

SignTestResult compare_policies(const SweepResult& result, SeedPolicy baseline, SeedPolicy better) {
    using PairKey = std::tuple<double, std::size_t, double, double, std::size_t>;
    std::map<PairKey, std::pair<std::optional<double>, std::optional<double>>> pairs;
    for (const SweepRow& row : result.rows) {
        if (row.failed()) continue;
        const PairKey key{row.cell.r, row.cell.seed_count, row.cell.p0, row.cell.c, row.replicate};
        if (row.cell.policy == baseline) pairs[key].first = static_cast<double>(row.exposed);
        if (row.cell.policy == better) pairs[key].second = static_cast<double>(row.exposed);
    }
    std::vector<double> a, b;
    for (const auto& [key, ab] : pairs) {
        if (ab.first && ab.second) {
            a.push_back(*ab.first);
            b.push_back(*ab.second);
        }
    }
    return sign_test(a, b);
}

}  // namespace cascadelab
