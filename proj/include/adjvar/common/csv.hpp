#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adjvar::csv {

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, CRLF.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Returns false at end of input. `line()` is the 1-based line where the row started.
    bool next_row(std::vector<std::string>& fields) {
        fields.clear();
        if (!in_.good() || in_.peek() == std::char_traits<char>::eof()) return false;
        row_line_ = next_line_;
        std::string field;
        bool quoted = false;
        bool field_started = false;
        for (;;) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) {
                fields.push_back(std::move(field));
                return true;
            }
            const char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                    }
                } else {
                    if (ch == '\n') ++next_line_;
                    field.push_back(ch);
                }
                continue;
            }
            if (ch == '"' && !field_started) {
                quoted = true;
                field_started = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
                field_started = false;
            } else if (ch == '\r') {
                if (in_.peek() == '\n') continue;
                field.push_back(ch);
            } else if (ch == '\n') {
                ++next_line_;
                fields.push_back(std::move(field));
                return true;
            } else {
                field.push_back(ch);
                field_started = true;
            }
        }
    }

    std::size_t line() const noexcept { return row_line_; }

private:
    std::istream& in_;
    std::size_t next_line_ = 1;
    std::size_t row_line_ = 0;
};

inline void write_field(std::ostream& out, std::string_view f) {
    if (f.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << f;
        return;
    }
    out << '"';
    for (char c : f) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

template <class Range>
void write_row(std::ostream& out, const Range& fields) {
    bool first = true;
    for (const auto& f : fields) {
        if (!first) out << ',';
        first = false;
        write_field(out, std::string_view{f});
    }
    out << '\n';
}

inline void write_row(std::ostream& out, std::initializer_list<std::string_view> fields) {
    bool first = true;
    for (auto f : fields) {
        if (!first) out << ',';
        first = false;
        write_field(out, f);
    }
    out << '\n';
}

// Shortest representation that round-trips.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

inline std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

}  // namespace adjvar::csv
