// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cascadelab/cascadelab.hpp"
#include "oracles.hpp"

using namespace cascadelab;

namespace {

constexpr std::uint64_t kBaseSeed = 20140601;

struct Outcome {
    bool pass;
    std::string detail;
};

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

SweepGrid reduced_grid() {
    SweepGrid g;
    g.n = 2000;
    g.m_attach = 2;
    g.group_ratios = {0.03};
    g.q_intra = 0.1;
    g.seed_counts = {25};
    g.p0_values = {0.05};
    g.c_values = {3.0};
    g.replicates = 20;
    g.base_seed = kBaseSeed;
    return g;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double policy_mean(const SweepResult& res, SeedPolicy p) {
    double s = 0;
    std::size_t n = 0;
    for (const auto& r : res.rows) {
        if (r.cell.policy == p && !r.failed()) {
            s += static_cast<double>(r.exposed);
            ++n;
        }
    }
    return n ? s / static_cast<double>(n) : std::nan("");
}

Outcome criterion1() {
    const auto res = run_sweep(reduced_grid(), jobs());
    const auto grp = compare_policies(res, SeedPolicy::RandomAll, SeedPolicy::RandomGroup);
    const auto cen = compare_policies(res, SeedPolicy::RandomAll, SeedPolicy::TopCentrality);
    const double mr = policy_mean(res, SeedPolicy::RandomAll);
    const double mg = policy_mean(res, SeedPolicy::RandomGroup);
    const double mc = policy_mean(res, SeedPolicy::TopCentrality);
    const bool ok = mr < mg && mr < mc && grp.p_value < 0.05 && cen.p_value < 0.05;
    return {ok, fmt("mean random=%.2f group=%.2f centrality=%.2f; sign test group %zu/%zu p=%.3g, "
                    "centrality %zu/%zu p=%.3g",
                    mr, mg, mc, grp.wins, grp.losses, grp.p_value, cen.wins, cen.losses, cen.p_value)};
}

Outcome criterion2() {
    SweepGrid g = SweepGrid::paper_grid();
    g.base_seed = kBaseSeed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_sweep(g, jobs());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto table = summarize_policy_ratios(res);
    const double ratio = table.overall.group_over_random;
    std::size_t failed = 0;
    for (const auto& r : res.rows) failed += r.failed();
    return {ratio >= 2.0 && ratio <= 4.5,
            fmt("%zu runs (%zu failed) in %.1fs; group/random=%.3f centrality/random=%.3f over %zu combinations",
                res.rows.size(), failed, secs, ratio, table.overall.centrality_over_random, table.overall.cells)};
}

Outcome criterion3() {
    const auto s = decay_schedule(0.1, 2.0, 1e-6);
    double worst = 0;
    for (std::size_t a = 0; a < s.size(); ++a) {
        const double expect = 0.1 * std::ldexp(1.0, -static_cast<int>(a));
        worst = std::max(worst, std::abs(s[a] - expect) / expect);
    }
    return {s.size() >= 3 && worst <= 1e-12, fmt("%zu terms, max relative error %.3g", s.size(), worst)};
}

Outcome criterion4() {
    const std::vector<Edge> e{{0, 1}};
    const Graph g(2, e);
    const std::vector<NodeId> seeds{0};
    const double expected = oracle::two_node_exposure(0.5, 2.0, 1e-6);
    const int runs = 100000;
    int hit = 0;
    for (int i = 0; i < runs; ++i) {
        CascadeParams p;
        p.p0 = 0.5;
        p.c = 2.0;
        p.p_floor = 1e-6;
        p.rng_seed = mix_seed(kBaseSeed, {4, static_cast<std::uint64_t>(i)});
        hit += run_cascade(g, seeds, p).exposed_count == 2;
    }
    const double got = static_cast<double>(hit) / runs;
    return {std::abs(got - expected) <= 0.01, fmt("empirical %.4f vs closed form %.4f", got, expected)};
}

Outcome criterion5() {
    const std::string names[4] = {"a", "b", "c", "d"};
    std::size_t checked = 0, mismatches = 0;
    for (std::size_t len = 1; len <= 12; ++len) {
        std::vector<std::size_t> digits(len, 0);
        std::vector<std::string> v(len);
        while (true) {
            for (std::size_t i = 0; i < len; ++i) v[i] = names[digits[i]];
            mismatches += recurrence_rate(v) != oracle::recurrence_rate(v);
            ++checked;
            std::size_t i = 0;
            while (i < len && ++digits[i] == 4) digits[i++] = 0;
            if (i == len) break;
        }
    }
    bool limits = true;
    for (std::size_t L = 1; L <= 200; ++L) {
        std::vector<std::string> distinct(L), same(L, "u");
        for (std::size_t i = 0; i < L; ++i) distinct[i] = "u" + std::to_string(i);
        limits &= recurrence_rate(distinct) == 0.0;
        limits &= std::abs(recurrence_rate(same) - static_cast<double>(L - 1) / static_cast<double>(L)) < 1e-15;
    }
    return {mismatches == 0 && limits && checked == 22369620,
            fmt("%zu vectors, %zu mismatches, limits %s", checked, mismatches, limits ? "ok" : "violated")};
}

Outcome criterion6() {
    const SweepGrid g = reduced_grid();
    constexpr std::size_t kLogs = 20, kMessages = 20, kMMax = 200;
    std::vector<double> rg(kMMax + 1, 0.0), rr(kMMax + 1, 0.0);
    for (std::size_t rep = 0; rep < kLogs; ++rep) {
        const GenParams gp{g.n, g.m_attach, g.group_ratios[0], g.q_intra, graph_seed(g.base_seed, 0, rep)};
        const Graph graph = generate_network(gp);
        for (auto policy : {SeedPolicy::RandomGroup, SeedPolicy::RandomAll}) {
            MessageLog log;
            std::vector<std::string> ids;
            for (std::size_t k = 0; k < kMessages; ++k) {
                CascadeParams p;
                p.p0 = g.p0_values[0];
                p.c = g.c_values[0];
                p.seed_count = g.seed_counts[0];
                p.policy = policy;
                p.rng_seed = mix_seed(kBaseSeed, {6, rep, static_cast<std::uint64_t>(policy), k});
                ids.push_back("msg" + std::to_string(k));
                append(log, export_trace(simulate(graph, p), ids.back()));
            }
            const auto curve = recurrence_curve(log, ids, kMMax, "");
            auto& acc = policy == SeedPolicy::RandomGroup ? rg : rr;
            for (const auto& pt : curve.points) acc[pt.m] += pt.rate / kLogs;
        }
    }
    bool dominates = true;
    std::size_t first_bad = 0;
    for (std::size_t m = 50; m <= kMMax; ++m) {
        if (rg[m] < rr[m]) {
            if (dominates) first_bad = m;
            dominates = false;
        }
    }
    const bool ratio_ok = rg[kMMax] >= 1.5 * rr[kMMax];
    std::string detail = fmt("R_group(50)=%.4f R_random(50)=%.4f R_group(200)=%.4f R_random(200)=%.4f ratio=%.2f",
                             rg[50], rr[50], rg[kMMax], rr[kMMax], rg[kMMax] / rr[kMMax]);
    if (!dominates) detail += fmt("; group below random first at m=%zu", first_bad);
    return {dominates && ratio_ok, detail};
}

Outcome criterion7() {
    std::mt19937_64 gen(kBaseSeed);
    oracle::PowerLawSampler sample(2.5, 1, 1'000'000);
    std::vector<std::uint64_t> xs(100000);
    for (auto& x : xs) x = sample(gen);
    const auto exact = fit_power_law(xs, 1, 300, PowerLawMethod::ExactDiscrete);
    const auto closed = fit_power_law(xs, 1, 300, PowerLawMethod::ClosedForm);
    const std::vector<std::uint64_t> ones(1000, 1);
    const double degenerate = fit_power_law(ones, 1, 300, PowerLawMethod::ClosedForm).alpha;
    const double target = 1.0 + 1.0 / std::log(2.0);
    const bool ok = std::abs(exact.alpha - 2.5) <= 0.1 && std::abs(degenerate - target) <= 1e-9;
    return {ok, fmt("exact MLE alpha=%.4f (n=%zu in [1,300]; closed form gives %.4f); all-xmin closed form "
                    "%.12f vs %.12f",
                    exact.alpha, exact.n, closed.alpha, degenerate, target)};
}

Outcome criterion8() {
    std::ifstream in(std::string(CASCADELAB_FIXTURES) + "/user_table.csv");
    csv::Reader reader(in);
    reader.next();
    MessageLog log;
    std::vector<std::pair<std::string, std::uint64_t>> expected;
    std::uint64_t fan = 0;
    while (auto row = reader.next()) {
        const auto& f = row->fields;
        const auto tweets = std::stoull(f[1]), retweets = std::stoull(f[2]);
        for (std::uint64_t i = 0; i < tweets; ++i) {
            log.records.push_back({f[0] + "/" + std::to_string(i), "", f[0], 0, false, std::nullopt});
        }
        for (std::uint64_t i = 0; i < retweets; ++i) {
            log.records.push_back(
                {f[0] + "/" + std::to_string(i % tweets), "", "fan" + std::to_string(fan++), 1, true, f[0]});
        }
        expected.emplace_back(f[0], std::stoull(f[3]));
    }
    const auto rows = user_stats(log);
    std::size_t matched = 0;
    std::string got;
    for (const auto& [user, avg] : expected) {
        for (const auto& r : rows) {
            if (r.user != user) continue;
            if (r.avg && *r.avg == avg) ++matched;
            got += (got.empty() ? "" : ",") + (r.avg ? std::to_string(*r.avg) : std::string("NA"));
        }
    }
    return {expected.size() == 12 && matched == 12, fmt("%zu/12 averages match: %s", matched, got.c_str())};
}

Outcome criterion9() {
    const auto a = run_sweep(reduced_grid(), 1);
    const auto b = run_sweep(reduced_grid(), jobs() > 1 ? jobs() : 4);
    std::ostringstream sa, sb;
    write_rows_csv(sa, a);
    write_rows_csv(sb, b);
    return {sa.str() == sb.str(), fmt("jobs=1 vs jobs=%zu: %zu bytes, %s", jobs() > 1 ? jobs() : std::size_t{4},
                                      sa.str().size(), sa.str() == sb.str() ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 policy ordering on the reduced grid", criterion1},
        {"2 group/random exposure ratio on the full grid", criterion2},
        {"3 decay law", criterion3},
        {"4 two-node cascade oracle", criterion4},
        {"5 recurrence rate vs brute force", criterion5},
        {"6 recurrence curves, group vs random seeding", criterion6},
        {"7 power-law fit", criterion7},
        {"8 user table averages", criterion8},
        {"9 sweep determinism across --jobs", criterion9},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("SKIP criterion 10 corpus-scale figures: need the original message corpus, which is not "
                "available; covered only by synthetic fixtures above\n");
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures ? 1 : 0;
}
