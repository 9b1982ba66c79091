#include "cascadelab/spreadstats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "cascadelab/csv.hpp"
#include "cascadelab/error.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

std::uint64_t RepetitionTable::count_of(std::string_view id) const {
    for (const auto& [mid, c] : counts) {
        if (mid == id) return c;
    }
    return 0;
}

std::size_t RepetitionTable::repeated_messages() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second > 1; }));
}

RepetitionTable repetition_counts(const MessageLog& log) {
    RepetitionTable table;
    std::unordered_map<std::string, std::size_t> slot;
    for (const auto& r : log.records) {
        auto [it, inserted] = slot.try_emplace(r.message_id, table.counts.size());
        if (inserted) table.counts.emplace_back(r.message_id, 0);
        ++table.counts[it->second].second;
    }
    for (const auto& [id, c] : table.counts) ++table.histogram[c];
    table.total_records = log.size();
    return table;
}

std::string_view to_string(PowerLawMethod method) {
    return method == PowerLawMethod::ClosedForm ? "closed-form" : "exact";
}

PowerLawMethod parse_power_law_method(std::string_view text) {
    if (text == "closed-form" || text == "closed") return PowerLawMethod::ClosedForm;
    if (text == "exact") return PowerLawMethod::ExactDiscrete;
    throw ParameterError("unknown power-law fit method: " + std::string(text));
}

namespace {

// Sums of x^-alpha and x^-alpha * ln x over the integers in [lo, hi]. Long
// ranges are summed explicitly up to a cap and finished with a midpoint
// integral, which is accurate to well below the fit tolerance there.
struct ZetaSums {
    double z = 0.0;
    double z_ln = 0.0;
};

ZetaSums truncated_sums(double alpha, std::uint64_t lo, std::uint64_t hi) {
    constexpr std::uint64_t kExplicit = 1'000'000;
    ZetaSums s;
    const std::uint64_t stop = hi - lo > kExplicit ? lo + kExplicit : hi;
    for (std::uint64_t x = lo; x <= stop; ++x) {
        const double lx = std::log(static_cast<double>(x));
        const double w = std::exp(-alpha * lx);
        s.z += w;
        s.z_ln += w * lx;
    }
    if (stop < hi) {
        const double a = static_cast<double>(stop) + 0.5;
        const double b = static_cast<double>(hi) + 0.5;
        if (std::abs(alpha - 1.0) < 1e-12) {
            s.z += std::log(b) - std::log(a);
            s.z_ln += 0.5 * (std::log(b) * std::log(b) - std::log(a) * std::log(a));
        } else {
            const double k = 1.0 - alpha;
            auto f = [&](double x) { return std::pow(x, k) / k; };
            auto g = [&](double x) { return std::pow(x, k) * (std::log(x) / k - 1.0 / (k * k)); };
            s.z += f(b) - f(a);
            s.z_ln += g(b) - g(a);
        }
    }
    return s;
}

double exact_discrete_alpha(double mean_log, std::uint64_t xmin, std::uint64_t xmax) {
    // The score is n * (E_alpha[ln x] - mean_log); E_alpha[ln x] falls
    // monotonically in alpha, so bisection on its sign finds the maximum.
    auto expected_log = [&](double alpha) {
        const ZetaSums s = truncated_sums(alpha, xmin, xmax);
        return s.z_ln / s.z;
    };
    double lo = -5.0;
    double hi = 60.0;
    if (expected_log(hi) >= mean_log) {
        throw InsufficientDataError("power-law likelihood has no finite maximum (observations concentrated at xmin)");
    }
    if (expected_log(lo) <= mean_log) {
        throw InsufficientDataError("power-law likelihood has no maximum in the supported exponent range");
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (expected_log(mid) > mean_log) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::uint64_t> observations, std::uint64_t xmin, std::uint64_t xmax,
                          PowerLawMethod method) {
    if (xmin < 1) throw ParameterError("xmin must be >= 1");
    if (xmax < xmin) throw ParameterError("xmax must be >= xmin");

    std::vector<std::uint64_t> window;
    for (std::uint64_t x : observations) {
        if (x >= xmin && x <= xmax) window.push_back(x);
    }
    if (window.size() < kMinPowerLawObservations) {
        throw InsufficientDataError("power-law fit needs at least " + std::to_string(kMinPowerLawObservations) +
                                    " observations in [" + std::to_string(xmin) + ", " + std::to_string(xmax) +
                                    "], got " + std::to_string(window.size()));
    }
    // Sorted summation makes the result independent of input order.
    std::sort(window.begin(), window.end());

    PowerLawFit fit;
    fit.n = window.size();
    fit.xmin = xmin;
    fit.xmax = xmax;
    fit.method = method;
    const double n = static_cast<double>(window.size());

    if (method == PowerLawMethod::ClosedForm) {
        const double shift = static_cast<double>(xmin) - 0.5;
        double s = 0.0;
        for (std::uint64_t x : window) s += std::log(static_cast<double>(x) / shift);
        fit.alpha = 1.0 + n / s;
        return fit;
    }

    double s = 0.0;
    for (std::uint64_t x : window) s += std::log(static_cast<double>(x));
    fit.alpha = exact_discrete_alpha(s / n, xmin, xmax);
    return fit;
}

PowerLawFit fit_power_law(const RepetitionTable& table, std::uint64_t xmin, std::uint64_t xmax,
                          PowerLawMethod method) {
    std::vector<std::uint64_t> obs;
    obs.reserve(table.counts.size());
    for (const auto& [id, c] : table.counts) obs.push_back(c);
    return fit_power_law(obs, xmin, xmax, method);
}

void PartitionThresholds::validate() const {
    if (!(low_min <= low_max && low_max < high_threshold && high_threshold <= outlier_cutoff)) {
        throw ParameterError("thresholds must satisfy low_min <= low_max < high_threshold <= outlier_cutoff");
    }
}

MessagePartition partition_messages(const RepetitionTable& table, const PartitionThresholds& t) {
    t.validate();
    MessagePartition p;
    for (const auto& [id, c] : table.counts) {
        if (c >= t.high_threshold) {
            (c >= t.outlier_cutoff ? p.outliers_removed : p.high).push_back(id);
        } else if (c >= t.low_min && c <= t.low_max) {
            p.low.push_back(id);
        } else if (c > 1) {
            p.discarded.push_back(id);
        }
    }
    return p;
}

namespace {

std::vector<std::string> subsample_in_order(const std::vector<std::string>& ids, std::size_t k, Rng& rng) {
    std::vector<std::size_t> pick(ids.size());
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(pick[i], pick[i + rng.below(pick.size() - i)]);
    }
    pick.resize(k);
    std::sort(pick.begin(), pick.end());
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i : pick) out.push_back(ids[i]);
    return out;
}

}  // namespace

EqualizedGroups equalize_groups(const MessagePartition& partition, std::uint64_t rng_seed) {
    if (partition.high.empty() || partition.low.empty()) {
        throw ParameterError("cannot equalize: high and low groups must both be non-empty");
    }
    Rng rng(rng_seed);
    EqualizedGroups out;
    const std::size_t k = std::min(partition.high.size(), partition.low.size());
    out.high = partition.high.size() > k ? subsample_in_order(partition.high, k, rng) : partition.high;
    out.low = partition.low.size() > k ? subsample_in_order(partition.low, k, rng) : partition.low;
    return out;
}

MessageIndex::MessageIndex(const MessageLog& log) : log_(&log) {
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        auto [it, inserted] = by_id_.try_emplace(log.records[i].message_id);
        if (inserted) ids_.push_back(log.records[i].message_id);
        it->second.push_back(i);
    }
    for (auto& [id, idx] : by_id_) {
        // Indices are ascending already, so a stable sort on timestamp keeps
        // input order among ties.
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return log.records[a].timestamp < log.records[b].timestamp;
        });
    }
}

const std::vector<std::size_t>& MessageIndex::occurrences(std::string_view id) const {
    const auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) throw UnknownMessageError(std::string(id));
    return it->second;
}

std::vector<std::string> earliest_spreaders(const MessageIndex& index, std::span<const std::string> messages,
                                            std::size_t m) {
    std::vector<std::string> out;
    for (const auto& id : messages) {
        const auto& occ = index.occurrences(id);
        const std::size_t take = std::min(m, occ.size());
        for (std::size_t i = 0; i < take; ++i) out.push_back(index.log().records[occ[i]].user);
    }
    return out;
}

std::vector<std::string> earliest_spreaders(const MessageLog& log, std::span<const std::string> messages,
                                            std::size_t m) {
    return earliest_spreaders(MessageIndex(log), messages, m);
}

double recurrence_rate(std::span<const std::string> record_vector) {
    if (record_vector.empty()) throw ParameterError("recurrence rate of an empty record vector");
    std::unordered_set<std::string_view> distinct(record_vector.begin(), record_vector.end());
    const double len = static_cast<double>(record_vector.size());
    return (len - static_cast<double>(distinct.size())) / len;
}

RecurrenceCurve recurrence_curve(const MessageIndex& index, std::span<const std::string> messages,
                                 std::size_t m_max, std::string group_label) {
    if (m_max < 1) throw ParameterError("m_max must be >= 1");
    if (messages.empty()) throw ParameterError("recurrence curve needs at least one message");
    std::vector<const std::vector<std::size_t>*> occ;
    occ.reserve(messages.size());
    for (const auto& id : messages) occ.push_back(&index.occurrences(id));

    RecurrenceCurve curve;
    curve.group = std::move(group_label);
    std::unordered_set<std::string_view> seen;
    std::size_t len = 0;
    const auto& records = index.log().records;
    for (std::size_t m = 1; m <= m_max; ++m) {
        for (const auto* list : occ) {
            if (list->size() >= m) {
                seen.insert(records[(*list)[m - 1]].user);
                ++len;
            }
        }
        const double rate = static_cast<double>(len - seen.size()) / static_cast<double>(len);
        curve.points.push_back({m, rate, len});
    }
    return curve;
}

RecurrenceCurve recurrence_curve(const MessageLog& log, std::span<const std::string> messages, std::size_t m_max,
                                 std::string group_label) {
    return recurrence_curve(MessageIndex(log), messages, m_max, std::move(group_label));
}

std::uint64_t round_half_up_ratio(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0) throw ParameterError("ratio with zero denominator");
    return (2 * numerator + denominator) / (2 * denominator);
}

std::vector<UserStatRow> user_stats(const MessageLog& log) {
    std::unordered_map<std::string, UserStatRow> rows;
    for (const auto& r : log.records) {
        if (r.is_retweet) {
            auto& row = rows[*r.origin_user];
            row.user = *r.origin_user;
            ++row.retweets;
        } else {
            auto& row = rows[r.user];
            row.user = r.user;
            ++row.tweets;
        }
    }
    std::vector<UserStatRow> out;
    out.reserve(rows.size());
    for (auto& [name, row] : rows) {
        if (row.tweets > 0) row.avg = round_half_up_ratio(row.retweets, row.tweets);
        out.push_back(std::move(row));
    }
    std::sort(out.begin(), out.end(), [](const UserStatRow& a, const UserStatRow& b) {
        if (a.avg.has_value() != b.avg.has_value()) return a.avg.has_value();
        if (a.avg != b.avg) return *a.avg > *b.avg;
        return a.user < b.user;
    });
    return out;
}

std::map<std::uint64_t, std::uint64_t> user_repetition_histogram(const MessageLog& log,
                                                                 std::span<const std::string> sampled_users) {
    const RepetitionTable table = repetition_counts(log);
    std::unordered_map<std::string_view, std::uint64_t> count;
    for (const auto& [id, c] : table.counts) count[id] = c;

    std::unordered_map<std::string_view, std::vector<std::string_view>> messages_of;
    for (const auto& r : log.records) messages_of[r.user].push_back(r.message_id);

    std::map<std::uint64_t, std::uint64_t> hist;
    for (const auto& user : sampled_users) {
        const auto it = messages_of.find(user);
        if (it == messages_of.end()) continue;
        std::vector<std::string_view> ids = it->second;
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto id : ids) {
            const std::uint64_t c = count[id];
            if (c > 1) ++hist[c];
        }
    }
    return hist;
}

std::vector<std::string> sample_users(const MessageIndex& index, std::span<const std::string> messages,
                                      std::size_t messages_to_sample, std::size_t users_per_message,
                                      std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::vector<std::string> pool(messages.begin(), messages.end());
    const std::size_t take = std::min(messages_to_sample, pool.size());
    const std::vector<std::string> chosen = subsample_in_order(pool, take, rng);

    std::vector<std::string> users;
    for (const auto& id : chosen) {
        std::vector<std::string> participants;
        std::unordered_set<std::string_view> seen;
        for (std::size_t i : index.occurrences(id)) {
            const auto& u = index.log().records[i].user;
            if (seen.insert(u).second) participants.push_back(u);
        }
        const auto picked = subsample_in_order(participants, std::min(users_per_message, participants.size()), rng);
        users.insert(users.end(), picked.begin(), picked.end());
    }
    return users;
}

void write_histogram_csv(std::ostream& out, const std::map<std::uint64_t, std::uint64_t>& histogram) {
    out << "value,count\n";
    for (const auto& [value, count] : histogram) out << value << ',' << count << '\n';
}

void write_curve_csv(std::ostream& out, const RecurrenceCurve& curve, bool header) {
    if (header) out << "m,R,group,vector_len\n";
    for (const auto& p : curve.points) {
        csv::write_row(out, {std::to_string(p.m), csv::format_double(p.rate), curve.group, std::to_string(p.vector_len)});
    }
}

void write_user_stats_csv(std::ostream& out, const std::vector<UserStatRow>& rows) {
    out << "user,tweets,retweets,avg\n";
    for (const auto& r : rows) {
        csv::write_row(out, {r.user, std::to_string(r.tweets), std::to_string(r.retweets),
                             r.avg ? std::to_string(*r.avg) : "NA"});
    }
}

}  // namespace cascadelab
