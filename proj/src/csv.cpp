#include "cascadelab/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "cascadelab/error.hpp"

namespace cascadelab::csv {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

std::optional<Record> Reader::next() {
    std::string line;
    auto content_end = [&line] {
        return !line.empty() && line.back() == '\r' ? line.size() - 1 : line.size();
    };
    while (true) {
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_;
        if (content_end() == 0) continue;
        if (skip_comments_ && !started_ && line.front() == '#') continue;
        break;
    }

    started_ = true;
    Record rec;
    rec.line = line_;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    std::size_t i = 0;
    while (true) {
        // Inside quotes a CR belongs to the field; outside it is the line ending.
        if (in_quotes ? i == line.size() : i >= content_end()) {
            if (!in_quotes) break;
            if (!std::getline(in_, line)) throw ParseError(rec.line, "unterminated quoted field");
            ++line_;
            field.push_back('\n');
            i = 0;
            continue;
        }
        const char ch = line[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                if (i < content_end() && line[i] != ',') {
                    throw ParseError(line_, "unexpected character after closing quote");
                }
                continue;
            }
            field.push_back(ch);
            ++i;
            continue;
        }
        if (ch == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (ch == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
        } else {
            field.push_back(ch);
        }
        ++i;
    }
    rec.fields.push_back(std::move(field));
    return rec;
}

}  // namespace cascadelab::csv
