#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cascadelab/csv.hpp"
#include "cascadelab/error.hpp"
#include "cascadelab/spreadstats.hpp"
#include "oracles.hpp"

using namespace cascadelab;

namespace {

MessageRecord rec(std::string id, std::string user, std::int64_t ts, std::optional<std::string> origin = {}) {
    MessageRecord r;
    r.message_id = std::move(id);
    r.user = std::move(user);
    r.timestamp = ts;
    r.is_retweet = origin.has_value();
    r.origin_user = std::move(origin);
    return r;
}

// Message i occurs counts[i] times.
MessageLog log_with_counts(const std::vector<std::uint64_t>& counts) {
    MessageLog log;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::uint64_t k = 0; k < counts[i]; ++k) {
            log.records.push_back(rec("m" + std::to_string(i), "u" + std::to_string(k), static_cast<std::int64_t>(k),
                                      k ? std::optional<std::string>("u0") : std::nullopt));
        }
    }
    return log;
}

}  // namespace

TEST(Repetition, CountsAndHistogram) {
    const auto log = log_with_counts({3, 1, 1, 5, 3});
    const auto t = repetition_counts(log);
    EXPECT_EQ(t.count_of("m3"), 5u);
    EXPECT_EQ(t.count_of("zz"), 0u);
    EXPECT_EQ(t.counts.front().first, "m0");
    EXPECT_EQ(t.histogram, (std::map<std::uint64_t, std::uint64_t>{{1, 2}, {3, 2}, {5, 1}}));
    EXPECT_EQ(t.repeated_messages(), 3u);
    EXPECT_EQ(t.total_records, 13u);
}

TEST(Repetition, MassConservationOnRandomLogs) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint64_t> counts(1 + gen() % 40);
        for (auto& c : counts) c = 1 + gen() % 30;
        const auto t = repetition_counts(log_with_counts(counts));
        std::uint64_t mass = 0, messages = 0;
        for (auto [v, c] : t.histogram) {
            mass += v * c;
            messages += c;
        }
        ASSERT_EQ(mass, t.total_records);
        ASSERT_EQ(messages, counts.size());
    }
    EXPECT_TRUE(repetition_counts(MessageLog{}).histogram.empty());
}

TEST(PowerLaw, DegenerateAllAtXmin) {
    const std::vector<std::uint64_t> ones(100, 1);
    EXPECT_NEAR(fit_power_law(ones).alpha, 1.0 + 1.0 / std::log(2.0), 1e-9);
    const std::vector<std::uint64_t> fives(60, 5);
    EXPECT_NEAR(fit_power_law(fives, 5).alpha, 1.0 + 1.0 / std::log(5.0 / 4.5), 1e-9);
}

TEST(PowerLaw, WindowAndErrors) {
    std::vector<std::uint64_t> xs(49, 2);
    EXPECT_THROW(fit_power_law(xs), InsufficientDataError);
    xs.push_back(1000);  // outside the window
    EXPECT_THROW(fit_power_law(xs), InsufficientDataError);
    xs.push_back(3);
    const auto f = fit_power_law(xs);
    EXPECT_EQ(f.n, 50u);
    EXPECT_THROW(fit_power_law(xs, 0), ParameterError);
    EXPECT_THROW(fit_power_law(xs, 10, 5), ParameterError);
    EXPECT_THROW(parse_power_law_method("lsq"), ParameterError);
}

TEST(PowerLaw, OrderInvariantBitIdentical) {
    std::mt19937_64 gen(8);
    oracle::PowerLawSampler sample(2.2, 1, 5000);
    std::vector<std::uint64_t> xs(5000);
    for (auto& x : xs) x = sample(gen);
    for (auto method : {PowerLawMethod::ClosedForm, PowerLawMethod::ExactDiscrete}) {
        const double a = fit_power_law(xs, 1, 300, method).alpha;
        for (int k = 0; k < 5; ++k) {
            std::shuffle(xs.begin(), xs.end(), gen);
            ASSERT_EQ(fit_power_law(xs, 1, 300, method).alpha, a);
        }
    }
}

TEST(PowerLaw, ExactRecoversExponent) {
    std::mt19937_64 gen(21);
    for (double alpha : {1.8, 2.5, 3.2}) {
        oracle::PowerLawSampler sample(alpha, 1, 300);
        std::vector<std::uint64_t> xs(40000);
        for (auto& x : xs) x = sample(gen);
        EXPECT_NEAR(fit_power_law(xs, 1, 300, PowerLawMethod::ExactDiscrete).alpha, alpha, 0.05) << alpha;
    }
}

TEST(PowerLaw, ClosedFormAccurateAwayFromXmin1) {
    std::mt19937_64 gen(4);
    oracle::PowerLawSampler sample(2.5, 10, 1'000'000);
    std::vector<std::uint64_t> xs(20000);
    for (auto& x : xs) x = sample(gen);
    EXPECT_NEAR(fit_power_law(xs, 10, 1'000'000).alpha, 2.5, 0.06);
}

TEST(Partition, BandsAndCoverage) {
    MessageLog log = log_with_counts({700, 699, 100, 400, 401, 99, 1, 1, 10000, 2});
    const auto t = repetition_counts(log);
    const auto p = partition_messages(t);
    EXPECT_EQ(p.high, std::vector<std::string>{"m0"});
    EXPECT_EQ(p.low, (std::vector<std::string>{"m2", "m3"}));
    EXPECT_EQ(p.discarded, (std::vector<std::string>{"m1", "m4", "m5", "m9"}));
    EXPECT_EQ(p.outliers_removed, std::vector<std::string>{"m8"});
    std::size_t singles = 0;
    for (const auto& [id, c] : t.counts) singles += c == 1;
    EXPECT_EQ(p.high.size() + p.low.size() + p.discarded.size() + p.outliers_removed.size() + singles,
              t.counts.size());

    PartitionThresholds bad;
    bad.low_max = 800;
    EXPECT_THROW(partition_messages(t, bad), ParameterError);
}

TEST(Partition, Equalize) {
    MessagePartition p;
    p.high = {"h1", "h2"};
    p.low = {"l1", "l2", "l3", "l4", "l5"};
    const auto eq = equalize_groups(p, 3);
    EXPECT_EQ(eq.high, p.high);
    ASSERT_EQ(eq.low.size(), 2u);
    EXPECT_LT(std::find(p.low.begin(), p.low.end(), eq.low[0]), std::find(p.low.begin(), p.low.end(), eq.low[1]));
    EXPECT_EQ(eq.low, equalize_groups(p, 3).low);
    p.high.clear();
    EXPECT_THROW(equalize_groups(p, 3), ParameterError);
}

TEST(Spreaders, EarliestWithTies) {
    MessageLog log;
    log.records = {rec("a", "x", 5), rec("a", "y", 1), rec("b", "z", 2), rec("a", "w", 1), rec("b", "x", 3)};
    const std::vector<std::string> msgs{"a", "b"};
    EXPECT_EQ(earliest_spreaders(log, msgs, 2), (std::vector<std::string>{"y", "w", "z", "x"}));
    EXPECT_EQ(earliest_spreaders(log, msgs, 10).size(), 5u);
    const std::vector<std::string> unknown{"nope"};
    EXPECT_THROW(earliest_spreaders(log, unknown, 1), UnknownMessageError);
}

TEST(Recurrence, ExhaustiveAgainstPairwiseOracle) {
    const std::string names[4] = {"a", "b", "c", "d"};
    std::size_t checked = 0;
    for (std::size_t len = 1; len <= 9; ++len) {  // up to 12 in the acceptance run
        std::vector<std::size_t> digits(len, 0);
        while (true) {
            std::vector<std::string> v(len);
            for (std::size_t i = 0; i < len; ++i) v[i] = names[digits[i]];
            ASSERT_EQ(recurrence_rate(v), oracle::recurrence_rate(v));
            ++checked;
            std::size_t i = 0;
            while (i < len && ++digits[i] == 4) digits[i++] = 0;
            if (i == len) break;
        }
    }
    EXPECT_EQ(checked, 349524u);  // sum of 4^len, len = 1..9
    EXPECT_THROW(recurrence_rate(std::vector<std::string>{}), ParameterError);
}

TEST(Recurrence, Limits) {
    EXPECT_EQ(recurrence_rate(std::vector<std::string>{"a", "b", "c"}), 0.0);
    for (std::size_t L = 1; L < 30; ++L) {
        EXPECT_DOUBLE_EQ(recurrence_rate(std::vector<std::string>(L, "u")), static_cast<double>(L - 1) / L);
    }
}

TEST(Recurrence, IncrementalCurveMatchesScratch) {
    std::mt19937_64 gen(12);
    MessageLog log;
    for (int msg = 0; msg < 15; ++msg) {
        const int count = 1 + static_cast<int>(gen() % 40);
        for (int k = 0; k < count; ++k) {
            log.records.push_back(rec("m" + std::to_string(msg), "u" + std::to_string(gen() % 25),
                                      static_cast<std::int64_t>(gen() % 50)));
        }
    }
    std::vector<std::string> msgs;
    for (int msg = 0; msg < 15; ++msg) msgs.push_back("m" + std::to_string(msg));
    const auto curve = recurrence_curve(log, msgs, 45, "g");
    ASSERT_EQ(curve.points.size(), 45u);
    EXPECT_EQ(curve.group, "g");
    for (const auto& pt : curve.points) {
        const auto v = earliest_spreaders(log, msgs, pt.m);
        ASSERT_EQ(pt.vector_len, v.size());
        ASSERT_NEAR(pt.rate, oracle::recurrence_rate(v), 1e-15) << pt.m;
    }
    EXPECT_THROW(recurrence_curve(log, msgs, 0, "g"), ParameterError);
}

TEST(UserStats, TableFixtureAndRounding) {
    std::ifstream in(std::string(CASCADELAB_FIXTURES) + "/user_table.csv");
    csv::Reader reader(in);
    reader.next();
    MessageLog log;
    std::vector<std::pair<std::string, std::uint64_t>> expected;
    int fan = 0;
    while (auto row = reader.next()) {
        const auto& f = row->fields;
        const auto tweets = std::stoull(f[1]), retweets = std::stoull(f[2]);
        for (std::uint64_t i = 0; i < tweets; ++i) log.records.push_back(rec(f[0] + "_" + std::to_string(i), f[0], 0));
        for (std::uint64_t i = 0; i < retweets; ++i) {
            log.records.push_back(rec(f[0] + "_" + std::to_string(i % tweets), "fan" + std::to_string(fan++ % 997), 1, f[0]));
        }
        expected.emplace_back(f[0], std::stoull(f[3]));
    }
    const auto rows = user_stats(log);
    std::map<std::string, std::uint64_t> got;
    for (const auto& r : rows)
        if (r.avg) got[r.user] = *r.avg;
    for (const auto& [user, avg] : expected) EXPECT_EQ(got.at(user), avg) << user;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].avg && rows[i - 1].avg) { EXPECT_GE(*rows[i - 1].avg, *rows[i].avg); }
    }
    std::uint64_t total = 0;
    for (const auto& r : rows) total += r.tweets + r.retweets;
    EXPECT_EQ(total, log.size());

    EXPECT_EQ(round_half_up_ratio(5, 2), 3u);
    EXPECT_EQ(round_half_up_ratio(7, 2), 4u);
    EXPECT_EQ(round_half_up_ratio(1, 3), 0u);
    EXPECT_THROW(round_half_up_ratio(1, 0), ParameterError);
}

TEST(UserStats, UndefinedAverageSortsLast) {
    MessageLog log;
    log.records = {rec("a", "p", 0), rec("a", "q", 1, "p"), rec("b", "r", 2, "ghost")};
    const auto rows = user_stats(log);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].user, "p");
    EXPECT_EQ(rows[1].user, "ghost");
    EXPECT_FALSE(rows[1].avg);
    std::ostringstream os;
    write_user_stats_csv(os, rows);
    EXPECT_EQ(os.str(), "user,tweets,retweets,avg\np,1,1,1\nghost,0,1,NA\n");
}

TEST(UserHistogram, FiltersSingletons) {
    MessageLog log;
    // u touches m1 (count 2, twice), m2 (count 2), m3 (count 5), m4 (count 1)
    log.records = {rec("m1", "u", 0), rec("m1", "u", 1, "u"), rec("m2", "u", 0), rec("m2", "v", 1, "u"),
                   rec("m4", "u", 0), rec("m3", "u", 0)};
    for (int i = 0; i < 4; ++i) log.records.push_back(rec("m3", "w" + std::to_string(i), 1, "u"));
    const std::vector<std::string> users{"u"};
    EXPECT_EQ(user_repetition_histogram(log, users), (std::map<std::uint64_t, std::uint64_t>{{2, 2}, {5, 1}}));
    const std::vector<std::string> lonely{"nobody"};
    EXPECT_TRUE(user_repetition_histogram(log, lonely).empty());
}

TEST(UserHistogram, SamplingPlan) {
    MessageLog log;
    for (int m = 0; m < 40; ++m)
        for (int k = 0; k < 30; ++k)
            log.records.push_back(rec("m" + std::to_string(m), "u" + std::to_string(m * 100 + k), k));
    const MessageIndex index(log);
    const auto users = sample_users(index, index.ids(), 20, 10, 5);
    EXPECT_EQ(users.size(), 200u);
    EXPECT_EQ(users, sample_users(index, index.ids(), 20, 10, 5));
    EXPECT_EQ(std::set<std::string>(users.begin(), users.end()).size(), 200u);
}

TEST(Writers, CsvShapes) {
    std::ostringstream h;
    write_histogram_csv(h, {{2, 3}, {7, 1}});
    EXPECT_EQ(h.str(), "value,count\n2,3\n7,1\n");
    RecurrenceCurve c{"high", {{1, 0.0, 2}, {2, 0.25, 4}}};
    std::ostringstream os;
    write_curve_csv(os, c);
    EXPECT_EQ(os.str(), "m,R,group,vector_len\n1,0,high,2\n2,0.25,high,4\n");
}
