#include "cascadelab/tweetlog.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "cascadelab/csv.hpp"
#include "cascadelab/error.hpp"

namespace cascadelab {

namespace {

constexpr std::array<std::string_view, 6> kColumns = {"message_id", "text",       "user",
                                                      "timestamp",  "is_retweet", "origin_user"};

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }
bool is_alnum(char ch) { return std::isalnum(static_cast<unsigned char>(ch)) != 0; }
char lower(char ch) { return static_cast<char>(std::tolower(static_cast<unsigned char>(ch))); }
char upper(char ch) { return static_cast<char>(std::toupper(static_cast<unsigned char>(ch))); }

std::int64_t parse_timestamp(std::string_view text, std::size_t line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "timestamp is not an integer: '" + std::string(text) + "'");
    }
    return value;
}

bool parse_flag(std::string_view text, std::size_t line) {
    if (text == "0") return false;
    if (text == "1") return true;
    throw ParseError(line, "is_retweet must be 0 or 1, got '" + std::string(text) + "'");
}

// Shared checks once the raw fields are in place.
void finish_record(MessageRecord& rec, std::size_t line, const ParseOptions& options) {
    if (rec.user.empty()) throw ParseError(line, "empty user");
    if (rec.is_retweet && !rec.origin_user) throw ParseError(line, "retweet without origin_user");
    if (!rec.is_retweet && rec.origin_user) throw ParseError(line, "origin_user set on an original post");
    if (rec.message_id.empty()) {
        if (rec.text.empty()) throw ParseError(line, "neither message_id nor text given");
        rec.message_id = message_id_for(rec.text, options.strip_retweet_prefix);
    }
}

void parse_csv(std::istream& in, const ParseOptions& options, ParseResult& result) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) return;
    std::array<std::size_t, kColumns.size()> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        const auto& f = header->fields;
        const auto it = std::find(f.begin(), f.end(), kColumns[c]);
        if (it == f.end()) throw ParseError(header->line, "missing column '" + std::string(kColumns[c]) + "'");
        index[c] = static_cast<std::size_t>(it - f.begin());
    }
    const std::size_t width = header->fields.size();

    while (true) {
        std::optional<csv::Record> rec;
        try {
            rec = reader.next();
        } catch (const ParseError& e) {
            // An unterminated quote swallows the rest of the input.
            if (options.strict) throw;
            ++result.skipped;
            result.issues.push_back({e.line(), e.what()});
            return;
        }
        if (!rec) return;
        try {
            if (rec->fields.size() != width) {
                throw ParseError(rec->line, "expected " + std::to_string(width) + " fields, got " +
                                                std::to_string(rec->fields.size()));
            }
            auto& f = rec->fields;
            MessageRecord m;
            m.message_id = std::move(f[index[0]]);
            m.text = std::move(f[index[1]]);
            m.user = std::move(f[index[2]]);
            m.timestamp = parse_timestamp(f[index[3]], rec->line);
            m.is_retweet = parse_flag(f[index[4]], rec->line);
            if (!f[index[5]].empty()) m.origin_user = std::move(f[index[5]]);
            finish_record(m, rec->line, options);
            result.log.records.push_back(std::move(m));
        } catch (const ParseError& e) {
            if (options.strict) throw;
            ++result.skipped;
            result.issues.push_back({e.line(), e.what()});
        }
    }
}

void parse_jsonl(std::istream& in, const ParseOptions& options, ParseResult& result) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), is_space)) continue;
        try {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
            }
            if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
            auto str = [&](const char* key, bool required) -> std::string {
                const auto it = j.find(key);
                if (it == j.end() || it->is_null()) {
                    if (required) throw ParseError(line_no, std::string("missing field '") + key + "'");
                    return {};
                }
                if (!it->is_string()) throw ParseError(line_no, std::string("field '") + key + "' must be a string");
                return it->get<std::string>();
            };
            MessageRecord m;
            m.message_id = str("message_id", false);
            m.text = str("text", false);
            m.user = str("user", true);
            const auto ts = j.find("timestamp");
            if (ts == j.end() || !ts->is_number_integer()) throw ParseError(line_no, "timestamp must be an integer");
            m.timestamp = ts->get<std::int64_t>();
            const auto rt = j.find("is_retweet");
            if (rt == j.end()) throw ParseError(line_no, "missing field 'is_retweet'");
            if (rt->is_boolean()) {
                m.is_retweet = rt->get<bool>();
            } else if (rt->is_number_integer() && (*rt == 0 || *rt == 1)) {
                m.is_retweet = *rt == 1;
            } else {
                throw ParseError(line_no, "is_retweet must be 0, 1, true or false");
            }
            std::string origin = str("origin_user", false);
            if (!origin.empty()) m.origin_user = std::move(origin);
            finish_record(m, line_no, options);
            result.log.records.push_back(std::move(m));
        } catch (const ParseError& e) {
            if (options.strict) throw;
            ++result.skipped;
            result.issues.push_back({e.line(), e.what()});
        }
    }
}

}  // namespace

LogFormat parse_log_format(std::string_view text) {
    if (text == "csv") return LogFormat::Csv;
    if (text == "jsonl" || text == "json") return LogFormat::JsonLines;
    throw ParameterError("unknown log format: " + std::string(text));
}

ParseResult parse_log(std::istream& in, LogFormat format, const ParseOptions& options) {
    ParseResult result;
    if (format == LogFormat::Csv) {
        parse_csv(in, options, result);
    } else {
        parse_jsonl(in, options, result);
    }
    return result;
}

void write_log(std::ostream& out, const MessageLog& log, LogFormat format) {
    if (format == LogFormat::Csv) {
        out << "message_id,text,user,timestamp,is_retweet,origin_user\n";
        for (const auto& r : log.records) {
            csv::write_row(out, {r.message_id, r.text, r.user, std::to_string(r.timestamp), r.is_retweet ? "1" : "0",
                                 r.origin_user.value_or("")});
        }
        return;
    }
    for (const auto& r : log.records) {
        nlohmann::ordered_json j;
        j["message_id"] = r.message_id;
        j["text"] = r.text;
        j["user"] = r.user;
        j["timestamp"] = r.timestamp;
        j["is_retweet"] = r.is_retweet ? 1 : 0;
        j["origin_user"] = r.origin_user ? nlohmann::ordered_json(*r.origin_user) : nlohmann::ordered_json(nullptr);
        out << j.dump() << '\n';
    }
}

std::string normalize_text(std::string_view text, bool strip_retweet_prefix) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        if (is_space(ch)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(lower(ch));
    }
    if (strip_retweet_prefix && out.starts_with("rt")) {
        // "rt @name:" or "rt@name:"
        std::size_t i = 2;
        if (i < out.size() && out[i] == ' ') ++i;
        if (i < out.size() && out[i] == '@') {
            const auto colon = out.find(':', i);
            const auto space = out.find(' ', i);
            if (colon != std::string::npos && (space == std::string::npos || colon < space)) {
                std::size_t rest = colon + 1;
                if (rest < out.size() && out[rest] == ' ') ++rest;
                out.erase(0, rest);
            }
        }
    }
    return out;
}

std::string message_id_for(std::string_view text, bool strip_retweet_prefix) {
    const std::string norm = normalize_text(text, strip_retweet_prefix);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : norm) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id(17, '0');
    id[0] = 'h';
    for (int i = 16; i >= 1; --i) {
        id[static_cast<std::size_t>(i)] = kHex[h & 0xf];
        h >>= 4;
    }
    return id;
}

std::vector<std::string> read_symbols(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string sym;
        for (char ch : line) {
            if (!is_space(ch)) sym.push_back(upper(ch));
        }
        if (sym.empty() || sym.front() == '#') continue;
        if (sym.front() == '$') sym.erase(0, 1);
        if (!sym.empty()) out.push_back(std::move(sym));
    }
    return out;
}

bool has_cashtag(std::string_view text, std::span<const std::string> symbols) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '$') continue;
        if (i > 0 && is_alnum(text[i - 1])) continue;
        std::size_t end = i + 1;
        while (end < text.size() && is_alnum(text[end])) ++end;
        if (end == i + 1) continue;
        std::string token;
        token.reserve(end - i - 1);
        for (std::size_t k = i + 1; k < end; ++k) token.push_back(upper(text[k]));
        if (std::find(symbols.begin(), symbols.end(), token) != symbols.end()) return true;
        i = end - 1;
    }
    return false;
}

MessageLog cashtag_filter(const MessageLog& log, std::span<const std::string> symbols) {
    if (symbols.empty()) throw ParameterError("cashtag filter needs at least one symbol");
    MessageLog out;
    for (const auto& r : log.records) {
        if (has_cashtag(r.text, symbols)) out.records.push_back(r);
    }
    return out;
}

MessageLog export_trace(const CascadeTrace& trace, std::string_view run_id, std::string_view user_prefix) {
    MessageLog out;
    out.records.reserve(trace.events.size());
    const std::string prefix(user_prefix);
    for (const auto& e : trace.events) {
        MessageRecord r;
        r.message_id = std::string(run_id);
        r.user = prefix + std::to_string(e.target);
        r.timestamp = e.step;
        r.is_retweet = !e.is_seed();
        if (r.is_retweet) r.origin_user = prefix + std::to_string(e.root);
        out.records.push_back(std::move(r));
    }
    return out;
}

void append(MessageLog& log, const MessageLog& more) {
    log.records.insert(log.records.end(), more.records.begin(), more.records.end());
}

}  // namespace cascadelab
