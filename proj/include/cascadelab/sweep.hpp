#ifndef CASCADELAB_SWEEP_HPP
#define CASCADELAB_SWEEP_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cascadelab/cascade.hpp"
#include "cascadelab/stats.hpp"

namespace cascadelab {

/**
 * Full factorial experiment: every combination of policy, group ratio,
 * seed count, p0 and c is a cell, and every cell is run `replicates` times.
 *
 * Cells are enumerated with policy outermost and c innermost, matching the
 * column order of the row CSV.
 */
struct SweepGrid {
    std::vector<SeedPolicy> policies{SeedPolicy::RandomAll, SeedPolicy::RandomGroup, SeedPolicy::TopCentrality};
    std::vector<double> group_ratios{0.03};
    std::vector<std::size_t> seed_counts{25};
    std::vector<double> p0_values{0.05};
    std::vector<double> c_values{3.0};
    std::size_t replicates = 20;
    std::size_t n = 10'000;
    std::uint64_t base_seed = 0;
    std::size_t m_attach = 2;
    double q_intra = 0.1;
    double p_floor = 1e-6;
    std::size_t max_steps = 10'000;
    StopRule stop_rule = StopRule::Exhaustion;

    /// 3 policies x 3 ratios x 3 seed counts x 3 p0 x 3 c, 20 replicates.
    static SweepGrid paper_grid();

    void validate() const;
    std::size_t cell_count() const;
};

struct SweepCell {
    std::size_t index = 0;
    SeedPolicy policy = SeedPolicy::RandomAll;
    std::size_t ratio_index = 0;
    double r = 0.0;
    std::size_t seed_count = 0;
    double p0 = 0.0;
    double c = 0.0;
};

/// Decodes a linear cell index.
SweepCell cell_at(const SweepGrid& grid, std::size_t index);

struct SweepRow {
    SweepCell cell;
    std::size_t replicate = 0;
    std::uint64_t run_seed = 0;
    std::size_t exposed = 0;
    std::uint32_t final_step = 0;
    bool truncated = false;
    std::optional<std::string> error;  // set when the run could not be executed

    bool failed() const noexcept { return error.has_value(); }
};

struct CellSummary {
    SweepCell cell;
    std::size_t runs = 0;  // successful runs aggregated
    double mean_exposed = 0.0;
    double std_exposed = 0.0;
    std::optional<std::string> error;  // first failure in the cell
};

struct SweepResult {
    std::vector<SweepRow> rows;            // sorted by (cell, replicate)
    std::vector<CellSummary> cell_summaries;
};

/// Seed of one run; depends only on (base_seed, cell index, replicate).
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t cell_index, std::size_t replicate);

/// Seed of the network shared by all cells with the same ratio in one
/// replicate, so policies are compared on identical graphs.
std::uint64_t graph_seed(std::uint64_t base_seed, std::size_t ratio_index, std::size_t replicate);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs the grid on `jobs` worker threads. Output is independent of `jobs`.
SweepResult run_sweep(const SweepGrid& grid, std::size_t jobs = 1, const SweepProgress& progress = {});

/// Recomputes per-cell summaries from rows.
std::vector<CellSummary> summarize_cells(const SweepGrid& grid, const std::vector<SweepRow>& rows);

/// `policy,r,seed_count,p0,c,replicate,run_seed,exposed,final_step`;
/// failed runs leave exposed and final_step empty.
void write_rows_csv(std::ostream& out, const SweepResult& result);

/// `policy,r,seed_count,p0,c,runs,mean_exposed,std_exposed,status`
void write_summary_csv(std::ostream& out, const SweepResult& result);

struct PolicyRatioRow {
    std::string scope;                 // "seed_count", "cell" or "overall"
    std::optional<std::size_t> seed_count;
    std::optional<double> r, p0, c;    // set for per-cell rows
    double mean_random = 0.0;
    double mean_group = 0.0;
    double mean_centrality = 0.0;
    double group_over_random = 0.0;
    double centrality_over_random = 0.0;
    std::size_t cells = 0;             // parameter combinations aggregated
};

struct PolicyRatioTable {
    std::vector<PolicyRatioRow> by_seed_count;
    std::vector<PolicyRatioRow> by_cell;
    PolicyRatioRow overall;
    std::vector<std::string> excluded;  // combinations lacking a usable policy
};

/**
 * Mean exposure per policy and the group/random and centrality/random
 * ratios. A parameter combination (r, seed_count, p0, c) contributes only
 * if all three policies ran successfully there; the rest are listed in
 * `excluded`.
 */
PolicyRatioTable summarize_policy_ratios(const SweepResult& result);

void write_ratio_csv(std::ostream& out, const PolicyRatioTable& table);

/**
 * Paired sign test of policy `better` against `baseline`: runs are paired
 * on (r, seed_count, p0, c, replicate), which share the same network.
 * Failed runs drop their pair.
 */
SignTestResult compare_policies(const SweepResult& result, SeedPolicy baseline, SeedPolicy better);

}  // namespace cascadelab

#endif  // CASCADELAB_SWEEP_HPP
