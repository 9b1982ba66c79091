#ifndef CASCADELAB_SPREADSTATS_HPP
#define CASCADELAB_SPREADSTATS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cascadelab/tweetlog.hpp"

namespace cascadelab {

/// Occurrence count per message and the histogram over those counts.
struct RepetitionTable {
    std::vector<std::pair<std::string, std::uint64_t>> counts;  // first-appearance order
    std::map<std::uint64_t, std::uint64_t> histogram;           // count -> number of messages
    std::uint64_t total_records = 0;

    std::uint64_t count_of(std::string_view id) const;
    std::size_t repeated_messages() const;  // messages with count > 1
};

RepetitionTable repetition_counts(const MessageLog& log);

enum class PowerLawMethod {
    /// alpha = 1 + n / sum(ln(x / (xmin - 0.5))). Closed form; noticeably
    /// biased low when xmin is small.
    ClosedForm,
    /// Maximises the likelihood of a discrete power law truncated to
    /// [xmin, xmax]. Unbiased at any xmin; diverges on data piled at xmin.
    ExactDiscrete,
};

std::string_view to_string(PowerLawMethod method);
PowerLawMethod parse_power_law_method(std::string_view text);

struct PowerLawFit {
    double alpha = 0.0;
    std::size_t n = 0;  // observations inside [xmin, xmax]
    std::uint64_t xmin = 1;
    std::uint64_t xmax = 300;
    PowerLawMethod method = PowerLawMethod::ClosedForm;
};

inline constexpr std::size_t kMinPowerLawObservations = 50;

/// Fits the exponent on raw observations in [xmin, xmax]. Needs at least
/// kMinPowerLawObservations in the window (InsufficientDataError).
/// The result does not depend on the order of `observations`.
PowerLawFit fit_power_law(std::span<const std::uint64_t> observations, std::uint64_t xmin = 1,
                          std::uint64_t xmax = 300, PowerLawMethod method = PowerLawMethod::ClosedForm);

/// Fits the per-message repetition counts of a table.
PowerLawFit fit_power_law(const RepetitionTable& table, std::uint64_t xmin = 1, std::uint64_t xmax = 300,
                          PowerLawMethod method = PowerLawMethod::ClosedForm);

struct PartitionThresholds {
    std::uint64_t high_threshold = 700;   // high: count >= this
    std::uint64_t low_min = 100;          // low: low_min <= count <= low_max
    std::uint64_t low_max = 400;
    std::uint64_t outlier_cutoff = 10'000;  // high messages at or above this are dropped

    void validate() const;
};

struct MessagePartition {
    std::vector<std::string> high;
    std::vector<std::string> low;
    std::vector<std::string> discarded;         // other messages with count > 1
    std::vector<std::string> outliers_removed;
};

/// Groups messages by repetition count; order follows the table.
MessagePartition partition_messages(const RepetitionTable& table, const PartitionThresholds& thresholds = {});

struct EqualizedGroups {
    std::vector<std::string> high;
    std::vector<std::string> low;
};

/// Down-samples the larger group uniformly to the size of the smaller one.
/// Kept ids retain their original relative order.
EqualizedGroups equalize_groups(const MessagePartition& partition, std::uint64_t rng_seed);

/**
 * Per-message occurrence lists sorted by (timestamp, input order). Built
 * once and shared by earliest_spreaders and recurrence_curve.
 */
class MessageIndex {
public:
    explicit MessageIndex(const MessageLog& log);

    /// Record indices of one message in spreading order; throws
    /// UnknownMessageError.
    const std::vector<std::size_t>& occurrences(std::string_view id) const;
    const MessageLog& log() const noexcept { return *log_; }
    std::size_t message_count() const noexcept { return by_id_.size(); }
    /// All message ids, first-appearance order.
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    const MessageLog* log_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_id_;
    std::vector<std::string> ids_;
};

/// Concatenation over `messages` of the first min(m, count) spreaders.
std::vector<std::string> earliest_spreaders(const MessageIndex& index, std::span<const std::string> messages,
                                            std::size_t m);
std::vector<std::string> earliest_spreaders(const MessageLog& log, std::span<const std::string> messages,
                                            std::size_t m);

/// (length - distinct names) / length. Throws ParameterError if empty.
double recurrence_rate(std::span<const std::string> record_vector);

struct RecurrencePoint {
    std::size_t m = 0;
    double rate = 0.0;
    std::size_t vector_len = 0;
};

struct RecurrenceCurve {
    std::string group;
    std::vector<RecurrencePoint> points;  // m = 1..m_max
};

/// R(m) for m = 1..m_max, built incrementally.
RecurrenceCurve recurrence_curve(const MessageIndex& index, std::span<const std::string> messages,
                                 std::size_t m_max, std::string group_label);
RecurrenceCurve recurrence_curve(const MessageLog& log, std::span<const std::string> messages, std::size_t m_max,
                                 std::string group_label);

struct UserStatRow {
    std::string user;
    std::uint64_t tweets = 0;    // original posts by the user
    std::uint64_t retweets = 0;  // retweets attributed to the user as origin
    std::optional<std::uint64_t> avg;  // round-half-up(retweets / tweets); empty when tweets == 0
};

/// Rows sorted by avg descending (undefined last), then by user name.
std::vector<UserStatRow> user_stats(const MessageLog& log);

/// retweets / tweets rounded half up, in integer arithmetic.
std::uint64_t round_half_up_ratio(std::uint64_t numerator, std::uint64_t denominator);

/**
 * For each sampled user: the distinct messages they took part in (as
 * poster or retweeter), minus messages occurring only once; the histogram
 * counts how many of those messages have each repetition count.
 */
std::map<std::uint64_t, std::uint64_t> user_repetition_histogram(const MessageLog& log,
                                                                 std::span<const std::string> sampled_users);

/// Draws `messages_to_sample` messages from `messages`, then up to
/// `users_per_message` distinct participants from each.
std::vector<std::string> sample_users(const MessageIndex& index, std::span<const std::string> messages,
                                      std::size_t messages_to_sample, std::size_t users_per_message,
                                      std::uint64_t rng_seed);

// CSV writers: `value,count`, `m,R,group,vector_len`, `user,tweets,retweets,avg`.
void write_histogram_csv(std::ostream& out, const std::map<std::uint64_t, std::uint64_t>& histogram);
void write_curve_csv(std::ostream& out, const RecurrenceCurve& curve, bool header = true);
void write_user_stats_csv(std::ostream& out, const std::vector<UserStatRow>& rows);

}  // namespace cascadelab

#endif  // CASCADELAB_SPREADSTATS_HPP
