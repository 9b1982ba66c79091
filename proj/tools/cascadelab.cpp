// cascadelab command-line front end.
#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascadelab/cascadelab.hpp"

namespace fs = std::filesystem;
using namespace cascadelab;

namespace {

// Failure inside a pipeline stage; reported as "<stage>: <message>".
struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& what) : std::runtime_error(stage + ": " + what) {}
};

template <class F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

struct Common {
    std::optional<std::uint64_t> seed;
    bool reproducible = false;
    std::string output;
};

struct Meta {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::optional<std::uint64_t> seed;
    bool reproducible = false;

    template <class T>
    void add(std::string key, const T& value) {
        std::ostringstream os;
        os << value;
        params.emplace_back(std::move(key), os.str());
    }
    void add(std::string key, double value) { params.emplace_back(std::move(key), csv::format_double(value)); }

    std::string line() const {
        std::string out = "# cascadelab " + std::string(kVersion) + " command=" + command;
        if (seed) out += " seed=" + std::to_string(*seed);
        for (const auto& [k, v] : params) out += " " + k + "=" + v;
        if (!reproducible) {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            out += " time=";
            out += buf;
        }
        return out + "\n";
    }
};

std::uint64_t resolve_seed(Common& common) {
    if (!common.seed) {
        std::random_device rd;
        common.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return *common.seed;
}

std::string join(const auto& xs) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += ';';
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) {
            out += csv::format_double(x);
        } else if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SeedPolicy>) {
            out += std::string(to_string(x));
        } else {
            out += std::to_string(x);
        }
    }
    return out;
}

// Writes to a temporary sibling then renames, so a failed run leaves no
// half-written artifact.
template <class F>
void write_file(const fs::path& path, const Meta& meta, F&& body) {
    stage("write " + path.string(), [&] {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot open for writing");
            out << meta.line();
            body(out);
            out.flush();
            if (!out) throw std::runtime_error("write failed");
        }
        fs::rename(tmp, path);
        return 0;
    });
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StageError("read " + path, "cannot open file");
    return in;
}

LogFormat guess_format(const std::string& path, const std::string& flag) {
    if (!flag.empty()) return parse_log_format(flag);
    return path.ends_with(".jsonl") || path.ends_with(".json") ? LogFormat::JsonLines : LogFormat::Csv;
}

MessageLog load_log(const std::string& path, const std::string& format, bool strict = true) {
    auto in = open_input(path);
    return stage("parse " + path, [&] {
        ParseOptions opts;
        opts.strict = strict;
        return parse_log(in, guess_format(path, format), opts).log;
    });
}

void add_common(CLI::App* cmd, Common& common, bool seeded, const std::string& out_help) {
    if (seeded) {
        cmd->add_option("--seed", common.seed, "Master RNG seed (generated and recorded if omitted)")
            ->envname("CASCADELAB_SEED");
    }
    cmd->add_flag("--reproducible", common.reproducible, "Omit the timestamp from metadata headers")
        ->envname("CASCADELAB_REPRODUCIBLE");
    cmd->add_option("-o,--output", common.output, out_help)->required();
}

void add_thresholds(CLI::App* cmd, PartitionThresholds& t) {
    cmd->add_option("--high", t.high_threshold, "High group: count >= this")->envname("CASCADELAB_HIGH");
    cmd->add_option("--low-min", t.low_min, "Low group lower bound")->envname("CASCADELAB_LOW_MIN");
    cmd->add_option("--low-max", t.low_max, "Low group upper bound")->envname("CASCADELAB_LOW_MAX");
    cmd->add_option("--outlier-cutoff", t.outlier_cutoff, "Drop high messages at or above this count")
        ->envname("CASCADELAB_OUTLIER_CUTOFF");
}

void add_thresholds_meta(Meta& meta, const PartitionThresholds& t) {
    meta.add("high", t.high_threshold);
    meta.add("low_min", t.low_min);
    meta.add("low_max", t.low_max);
    meta.add("outlier_cutoff", t.outlier_cutoff);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spreading-group simulation and message-log analytics"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Common common;

    // gen
    GenParams gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a network with a planted spreading group");
    gen_cmd->add_option("--n", gen.n, "Node count")->envname("CASCADELAB_N");
    gen_cmd->add_option("--m-attach", gen.m_attach, "Edges per arriving node")->envname("CASCADELAB_M_ATTACH");
    gen_cmd->add_option("--r", gen.r, "Spreading-group ratio")->envname("CASCADELAB_R");
    gen_cmd->add_option("--q-intra", gen.q_intra, "Intra-group edge probability")->envname("CASCADELAB_Q_INTRA");
    add_common(gen_cmd, common, true, "Edge-list output file");

    // simulate
    CascadeParams cas;
    std::string graph_path, policy = "random", stop_rule = "exhaustion";
    std::size_t messages = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Run cascades and write them as a message log");
    sim_cmd->add_option("--graph", graph_path, "Edge-list input (otherwise generated from the network flags)")
        ->envname("CASCADELAB_GRAPH");
    sim_cmd->add_option("--n", gen.n, "Node count")->envname("CASCADELAB_N");
    sim_cmd->add_option("--m-attach", gen.m_attach, "Edges per arriving node")->envname("CASCADELAB_M_ATTACH");
    sim_cmd->add_option("--r", gen.r, "Spreading-group ratio")->envname("CASCADELAB_R");
    sim_cmd->add_option("--q-intra", gen.q_intra, "Intra-group edge probability")->envname("CASCADELAB_Q_INTRA");
    sim_cmd->add_option("--p0", cas.p0, "Initial transmission probability")->envname("CASCADELAB_P0");
    sim_cmd->add_option("--c", cas.c, "Retention loss factor")->envname("CASCADELAB_C");
    sim_cmd->add_option("--seeds", cas.seed_count, "Seed nodes per cascade")->envname("CASCADELAB_SEEDS");
    sim_cmd->add_option("--policy", policy, "random | group | centrality")->envname("CASCADELAB_POLICY");
    sim_cmd->add_option("--p-floor", cas.p_floor, "Dormancy threshold")->envname("CASCADELAB_P_FLOOR");
    sim_cmd->add_option("--max-steps", cas.max_steps, "Step cap")->envname("CASCADELAB_MAX_STEPS");
    sim_cmd->add_option("--stop-rule", stop_rule, "exhaustion | quiet")->envname("CASCADELAB_STOP_RULE");
    sim_cmd->add_option("--messages", messages, "Number of cascades (one message each)")
        ->envname("CASCADELAB_MESSAGES");
    add_common(sim_cmd, common, true, "Log CSV output file");

    // sweep
    SweepGrid grid;
    bool paper_grid = false;
    std::size_t jobs = 1;
    std::vector<std::string> policies;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run the factorial experiment grid");
    sweep_cmd->add_flag("--paper-grid", paper_grid, "3x3x3x3x3 grid, 20 replicates, n = 10000");
    sweep_cmd->add_option("--n", grid.n, "Node count")->envname("CASCADELAB_N");
    sweep_cmd->add_option("--m-attach", grid.m_attach, "Edges per arriving node")->envname("CASCADELAB_M_ATTACH");
    sweep_cmd->add_option("--q-intra", grid.q_intra, "Intra-group edge probability")
        ->envname("CASCADELAB_Q_INTRA");
    sweep_cmd->add_option("--policies", policies, "Policies to run")->delimiter(',');
    sweep_cmd->add_option("--ratios", grid.group_ratios, "Group ratios")->delimiter(',');
    sweep_cmd->add_option("--seed-counts", grid.seed_counts, "Seed counts")->delimiter(',');
    sweep_cmd->add_option("--p0", grid.p0_values, "p0 levels")->delimiter(',');
    sweep_cmd->add_option("--c", grid.c_values, "Retention loss levels")->delimiter(',');
    sweep_cmd->add_option("--replicates", grid.replicates, "Runs per cell")->envname("CASCADELAB_REPLICATES");
    sweep_cmd->add_option("--p-floor", grid.p_floor, "Dormancy threshold")->envname("CASCADELAB_P_FLOOR");
    sweep_cmd->add_option("--max-steps", grid.max_steps, "Step cap")->envname("CASCADELAB_MAX_STEPS");
    sweep_cmd->add_option("--stop-rule", stop_rule, "exhaustion | quiet")->envname("CASCADELAB_STOP_RULE");
    sweep_cmd->add_option("--jobs,-j", jobs, "Worker threads")->envname("CASCADELAB_JOBS");
    bool progress = false;
    sweep_cmd->add_flag("--progress", progress, "Print one line per finished work unit to stderr");
    add_common(sweep_cmd, common, true, "Output directory");

    // ingest
    std::string input, format, symbols_path;
    bool lenient = false, keep_rt = false;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse, validate and filter a message log");
    ingest_cmd->add_option("input", input, "Log file (csv or jsonl)")->required();
    ingest_cmd->add_option("--format", format, "csv | jsonl (default: from extension)");
    ingest_cmd->add_option("--symbols", symbols_path, "Ticker list; keep only records with a listed cashtag")
        ->envname("CASCADELAB_SYMBOLS");
    ingest_cmd->add_flag("--lenient,!--strict", lenient, "Skip malformed rows instead of failing");
    ingest_cmd->add_flag("--keep-rt", keep_rt, "Do not strip 'RT @user:' before hashing message ids");
    add_common(ingest_cmd, common, false, "Log CSV output file");

    // analyze
    std::uint64_t xmin = 1, xmax = 300;
    std::string fit_method = "closed-form";
    PartitionThresholds thresholds;
    std::size_t sample_messages = 0, users_per_message = 10;
    auto* analyze_cmd = app.add_subcommand("analyze", "Repetition histogram, power-law fit and partition");
    analyze_cmd->add_option("input", input, "Log file")->required();
    analyze_cmd->add_option("--format", format, "csv | jsonl");
    analyze_cmd->add_option("--xmin", xmin, "Fit window lower bound")->envname("CASCADELAB_XMIN");
    analyze_cmd->add_option("--xmax", xmax, "Fit window upper bound")->envname("CASCADELAB_XMAX");
    analyze_cmd->add_option("--fit-method", fit_method, "closed-form | exact")->envname("CASCADELAB_FIT_METHOD");
    add_thresholds(analyze_cmd, thresholds);
    analyze_cmd->add_option("--sample-messages", sample_messages,
                            "Also write per-group user repetition histograms from this many messages per group");
    analyze_cmd->add_option("--users-per-message", users_per_message, "Users drawn per sampled message");
    analyze_cmd->add_option("--seed", common.seed, "Seed for user sampling")->envname("CASCADELAB_SEED");
    analyze_cmd->add_flag("--reproducible", common.reproducible, "Omit timestamps")
        ->envname("CASCADELAB_REPRODUCIBLE");
    analyze_cmd->add_option("-o,--output", common.output, "Output directory")->required();

    // curve
    std::optional<std::size_t> m_max;
    bool all_messages = false, equalize = false;
    auto* curve_cmd = app.add_subcommand("curve", "Recurrence-rate curves for the high and low groups");
    curve_cmd->add_option("input", input, "Log file")->required();
    curve_cmd->add_option("--format", format, "csv | jsonl");
    curve_cmd->add_option("--m-max", m_max, "Largest m (default: smallest occurrence count in the groups)")
        ->envname("CASCADELAB_M_MAX");
    curve_cmd->add_flag("--all", all_messages, "One curve over every message instead of high/low");
    curve_cmd->add_flag("--equalize", equalize, "Down-sample the larger group to the smaller one");
    add_thresholds(curve_cmd, thresholds);
    curve_cmd->add_option("--seed", common.seed, "Seed for --equalize")->envname("CASCADELAB_SEED");
    curve_cmd->add_flag("--reproducible", common.reproducible, "Omit timestamps")
        ->envname("CASCADELAB_REPRODUCIBLE");
    curve_cmd->add_option("-o,--output", common.output, "Curve CSV output file")->required();

    // userstats
    auto* users_cmd = app.add_subcommand("userstats", "Per-user tweets, retweets and rounded average");
    users_cmd->add_option("input", input, "Log file")->required();
    users_cmd->add_option("--format", format, "csv | jsonl");
    add_common(users_cmd, common, false, "User stats CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) std::cerr << app.help() << "\n";
        return app.exit(e);
    }

    try {
        Meta meta;
        meta.reproducible = common.reproducible;

        if (*gen_cmd) {
            meta.command = "gen";
            gen.rng_seed = resolve_seed(common);
            meta.seed = gen.rng_seed;
            meta.add("n", gen.n);
            meta.add("m_attach", gen.m_attach);
            meta.add("r", gen.r);
            meta.add("q_intra", gen.q_intra);
            const Graph g = stage("gen", [&] { return generate_network(gen); });
            write_file(common.output, meta, [&](std::ostream& out) { write_edge_list(out, g); });
        } else if (*sim_cmd) {
            meta.command = "simulate";
            const std::uint64_t seed = resolve_seed(common);
            meta.seed = seed;
            cas.policy = stage("simulate", [&] { return parse_policy(policy); });
            cas.stop_rule = stage("simulate", [&] { return parse_stop_rule(stop_rule); });
            Graph g;
            if (!graph_path.empty()) {
                auto in = open_input(graph_path);
                g = stage("read " + graph_path, [&] { return read_edge_list(in); });
                meta.add("graph", graph_path);
            } else {
                gen.rng_seed = mix_seed(seed, {0});
                g = stage("gen", [&] { return generate_network(gen); });
                meta.add("n", gen.n);
                meta.add("m_attach", gen.m_attach);
                meta.add("r", gen.r);
                meta.add("q_intra", gen.q_intra);
            }
            meta.add("p0", cas.p0);
            meta.add("c", cas.c);
            meta.add("seeds", cas.seed_count);
            meta.add("policy", to_string(cas.policy));
            meta.add("p_floor", cas.p_floor);
            meta.add("max_steps", cas.max_steps);
            meta.add("stop_rule", to_string(cas.stop_rule));
            meta.add("messages", messages);
            const MessageLog log = stage("simulate", [&] {
                if (messages == 0) throw ParameterError("--messages must be positive");
                std::vector<double> centrality;
                if (cas.policy == SeedPolicy::TopCentrality) centrality = eigenvector_centrality(g);
                MessageLog out;
                for (std::size_t i = 0; i < messages; ++i) {
                    CascadeParams p = cas;
                    p.rng_seed = mix_seed(seed, {1, i});
                    const auto trace = cas.policy == SeedPolicy::TopCentrality
                                           ? simulate(g, p, std::span<const double>(centrality))
                                           : simulate(g, p);
                    append(out, export_trace(trace, "sim" + std::to_string(i)));
                }
                return out;
            });
            write_file(common.output, meta, [&](std::ostream& out) { write_log(out, log, LogFormat::Csv); });
        } else if (*sweep_cmd) {
            meta.command = "sweep";
            if (paper_grid) {
                SweepGrid preset = SweepGrid::paper_grid();
                preset.p_floor = grid.p_floor;
                preset.max_steps = grid.max_steps;
                grid = preset;
            }
            grid.base_seed = resolve_seed(common);
            meta.seed = grid.base_seed;
            grid.stop_rule = stage("sweep", [&] { return parse_stop_rule(stop_rule); });
            if (!policies.empty()) {
                grid.policies.clear();
                for (const auto& p : policies) grid.policies.push_back(stage("sweep", [&] { return parse_policy(p); }));
            }
            meta.add("n", grid.n);
            meta.add("m_attach", grid.m_attach);
            meta.add("q_intra", grid.q_intra);
            meta.add("policies", join(grid.policies));
            meta.add("ratios", join(grid.group_ratios));
            meta.add("seed_counts", join(grid.seed_counts));
            meta.add("p0", join(grid.p0_values));
            meta.add("c", join(grid.c_values));
            meta.add("replicates", grid.replicates);
            meta.add("p_floor", grid.p_floor);
            meta.add("max_steps", grid.max_steps);
            meta.add("stop_rule", to_string(grid.stop_rule));
            SweepProgress report;
            if (progress) {
                report = [](std::size_t done, std::size_t total) {
                    std::cerr << "sweep: " << done << "/" << total << "\n";
                };
            }
            const SweepResult result = stage("sweep", [&] { return run_sweep(grid, jobs, report); });
            const fs::path dir(common.output);
            write_file(dir / "rows.csv", meta, [&](std::ostream& out) { write_rows_csv(out, result); });
            write_file(dir / "summary.csv", meta, [&](std::ostream& out) { write_summary_csv(out, result); });
            if (grid.policies.size() == 3) {
                const auto table = summarize_policy_ratios(result);
                write_file(dir / "ratios.csv", meta, [&](std::ostream& out) { write_ratio_csv(out, table); });
            }
            std::size_t failed = 0;
            for (const auto& row : result.rows) failed += row.failed() ? 1 : 0;
            if (failed) std::cerr << "sweep: " << failed << " of " << result.rows.size() << " runs failed\n";
        } else if (*ingest_cmd) {
            meta.command = "ingest";
            meta.add("input", input);
            meta.add("mode", lenient ? "lenient" : "strict");
            meta.add("strip_rt", keep_rt ? 0 : 1);
            auto in = open_input(input);
            ParseResult parsed = stage("parse " + input, [&] {
                ParseOptions opts;
                opts.strict = !lenient;
                opts.strip_retweet_prefix = !keep_rt;
                return parse_log(in, guess_format(input, format), opts);
            });
            for (const auto& issue : parsed.issues) std::cerr << "skipped line " << issue.line << ": " << issue.message << "\n";
            MessageLog log = std::move(parsed.log);
            if (!symbols_path.empty()) {
                auto sin = open_input(symbols_path);
                const auto symbols = read_symbols(sin);
                meta.add("symbols", symbols_path);
                log = stage("filter", [&] { return cashtag_filter(log, symbols); });
            }
            meta.add("records", log.size());
            meta.add("skipped", parsed.skipped);
            write_file(common.output, meta, [&](std::ostream& out) { write_log(out, log, LogFormat::Csv); });
        } else if (*analyze_cmd) {
            meta.command = "analyze";
            meta.add("input", input);
            const MessageLog log = load_log(input, format);
            const RepetitionTable table = stage("analyze", [&] { return repetition_counts(log); });
            const auto method = stage("analyze", [&] { return parse_power_law_method(fit_method); });
            stage("analyze", [&] { thresholds.validate(); return 0; });
            add_thresholds_meta(meta, thresholds);
            const fs::path dir(common.output);
            write_file(dir / "histogram.csv", meta,
                       [&](std::ostream& out) { write_histogram_csv(out, table.histogram); });

            Meta fit_meta = meta;
            fit_meta.add("xmin", xmin);
            fit_meta.add("xmax", xmax);
            fit_meta.add("method", to_string(method));
            std::optional<PowerLawFit> fit;
            std::string fit_status = "ok";
            try {
                fit = fit_power_law(table, xmin, xmax, method);
            } catch (const InsufficientDataError& e) {
                fit_status = e.what();
            }
            write_file(dir / "powerlaw.csv", fit_meta, [&](std::ostream& out) {
                out << "alpha,n,xmin,xmax,method,status\n";
                csv::write_row(out, {fit ? csv::format_double(fit->alpha) : "", fit ? std::to_string(fit->n) : "0",
                                     std::to_string(xmin), std::to_string(xmax), std::string(to_string(method)),
                                     fit_status});
            });

            const auto part = stage("partition", [&] { return partition_messages(table, thresholds); });
            write_file(dir / "partition.csv", meta, [&](std::ostream& out) {
                out << "message_id,count,group\n";
                auto emit = [&](const std::vector<std::string>& ids, const char* group) {
                    for (const auto& id : ids) csv::write_row(out, {id, std::to_string(table.count_of(id)), group});
                };
                emit(part.high, "high");
                emit(part.low, "low");
                emit(part.discarded, "discarded");
                emit(part.outliers_removed, "outlier");
            });

            if (sample_messages > 0) {
                const std::uint64_t seed = resolve_seed(common);
                Meta um = meta;
                um.seed = seed;
                um.add("sample_messages", sample_messages);
                um.add("users_per_message", users_per_message);
                const MessageIndex index(log);
                const std::pair<const char*, const std::vector<std::string>*> groups[] = {{"high", &part.high},
                                                                                          {"low", &part.low}};
                std::uint64_t k = 0;
                for (const auto& [name, ids] : groups) {
                    const auto users = stage("sample users", [&] {
                        return sample_users(index, *ids, sample_messages, users_per_message, mix_seed(seed, {k++}));
                    });
                    const auto hist = stage("user histogram", [&] { return user_repetition_histogram(log, users); });
                    write_file(dir / (std::string("users_") + name + ".csv"), um,
                               [&](std::ostream& out) { write_histogram_csv(out, hist); });
                }
            }
        } else if (*curve_cmd) {
            meta.command = "curve";
            meta.add("input", input);
            const MessageLog log = load_log(input, format);
            const MessageIndex index(log);
            std::vector<std::pair<std::string, std::vector<std::string>>> groups;
            if (all_messages) {
                groups.emplace_back("all", index.ids());
                meta.add("groups", "all");
            } else {
                const auto table = repetition_counts(log);
                auto part = stage("partition", [&] { return partition_messages(table, thresholds); });
                add_thresholds_meta(meta, thresholds);
                if (equalize) {
                    const std::uint64_t seed = resolve_seed(common);
                    meta.seed = seed;
                    meta.add("equalize", 1);
                    auto eq = stage("equalize", [&] { return equalize_groups(part, seed); });
                    part.high = std::move(eq.high);
                    part.low = std::move(eq.low);
                }
                groups.emplace_back("high", part.high);
                groups.emplace_back("low", part.low);
            }
            std::size_t smallest = std::numeric_limits<std::size_t>::max();
            for (const auto& [name, ids] : groups) {
                if (ids.empty()) throw StageError("curve", "group '" + name + "' has no messages");
                for (const auto& id : ids) smallest = std::min(smallest, index.occurrences(id).size());
            }
            const std::size_t mm = m_max.value_or(smallest);
            meta.add("m_max", mm);
            std::vector<RecurrenceCurve> curves;
            for (const auto& [name, ids] : groups) {
                curves.push_back(stage("curve", [&] { return recurrence_curve(index, ids, mm, name); }));
            }
            write_file(common.output, meta, [&](std::ostream& out) {
                for (std::size_t i = 0; i < curves.size(); ++i) write_curve_csv(out, curves[i], i == 0);
            });
        } else if (*users_cmd) {
            meta.command = "userstats";
            meta.add("input", input);
            const MessageLog log = load_log(input, format);
            const auto rows = stage("userstats", [&] { return user_stats(log); });
            write_file(common.output, meta, [&](std::ostream& out) { write_user_stats_csv(out, rows); });
        }
    } catch (const StageError& e) {
        std::cerr << "cascadelab: error in " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "cascadelab: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
