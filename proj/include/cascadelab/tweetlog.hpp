#ifndef CASCADELAB_TWEETLOG_HPP
#define CASCADELAB_TWEETLOG_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascadelab/cascade.hpp"

namespace cascadelab {

/// One occurrence of a message. A retweet carries the user who started the
/// cascade in origin_user; an original post has no origin_user.
struct MessageRecord {
    std::string message_id;
    std::string text;
    std::string user;
    std::int64_t timestamp = 0;  // epoch seconds or simulation step
    bool is_retweet = false;
    std::optional<std::string> origin_user;

    friend bool operator==(const MessageRecord&, const MessageRecord&) = default;
};

struct MessageLog {
    std::vector<MessageRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
    friend bool operator==(const MessageLog&, const MessageLog&) = default;
};

enum class LogFormat { Csv, JsonLines };

LogFormat parse_log_format(std::string_view text);

struct ParseOptions {
    bool strict = true;
    /// Drop a leading "RT @name:" before hashing text into a message id.
    bool strip_retweet_prefix = true;
};

struct ParseIssue {
    std::size_t line = 0;
    std::string message;
};

struct ParseResult {
    MessageLog log;
    std::size_t skipped = 0;
    std::vector<ParseIssue> issues;  // one per skipped row (lenient mode)
};

/**
 * Reads a message log.
 *
 * CSV needs a header naming the columns
 * `message_id,text,user,timestamp,is_retweet,origin_user` (any order);
 * leading '#' lines are skipped. JSON lines holds one object per line with
 * the same keys. An empty message_id is replaced by message_id_for(text).
 *
 * Strict mode throws ParseError at the first malformed row; lenient mode
 * skips it and reports it in `issues`.
 */
ParseResult parse_log(std::istream& in, LogFormat format, const ParseOptions& options = {});

/// Writes the log so that parse_log reproduces it exactly.
void write_log(std::ostream& out, const MessageLog& log, LogFormat format);

/// Lowercase, collapse whitespace runs, trim; optionally strip "RT @name:".
std::string normalize_text(std::string_view text, bool strip_retweet_prefix = true);

/// Stable content id: "h" + 16 hex digits of FNV-1a 64 over normalize_text.
std::string message_id_for(std::string_view text, bool strip_retweet_prefix = true);

/// One ticker per line; blank lines and '#' lines ignored; uppercased.
std::vector<std::string> read_symbols(std::istream& in);

/// True if text contains '$' + one of the symbols as a whole token
/// (case-insensitive). Symbols must be uppercase.
bool has_cashtag(std::string_view text, std::span<const std::string> symbols);

/// Records whose text mentions a listed cashtag, order preserved.
MessageLog cashtag_filter(const MessageLog& log, std::span<const std::string> symbols);

/**
 * Converts a cascade into log records: one per exposure, message_id =
 * run_id, user = prefix + node id, timestamp = step. Seeds become original
 * posts; every other exposure is a retweet attributed to the root seed.
 */
MessageLog export_trace(const CascadeTrace& trace, std::string_view run_id, std::string_view user_prefix = "u");

/// Appends `more` to `log`.
void append(MessageLog& log, const MessageLog& more);

}  // namespace cascadelab

#endif  // CASCADELAB_TWEETLOG_HPP
