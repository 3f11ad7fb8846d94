#pragma once

// Small helpers shared by the line-oriented file loaders.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace icongloss::detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Lines of a document with 1-based numbers, comments ('#' to end of line)
/// stripped, blank lines dropped.
inline std::vector<std::pair<int, std::string>> content_lines(std::string_view document) {
    std::vector<std::pair<int, std::string>> out;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        std::size_t nl = document.find('\n', pos);
        std::string_view line =
            document.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) out.emplace_back(lineno, std::string(line));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.emplace_back(s.substr(start, i - start));
    }
    return out;
}

inline std::vector<std::string> split_on(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        out.emplace_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                           : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

/// Splits on whitespace, keeping double-quoted spans (with their quotes)
/// inside a single token: `lemma="of the" post=i:"of"` -> 2 tokens.
inline std::vector<std::string> split_ws_quoted(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (char c : s) {
        if (c == '"') {
            in_quotes = !in_quotes;
            cur += c;
        } else if (!in_quotes && std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace icongloss::detail
