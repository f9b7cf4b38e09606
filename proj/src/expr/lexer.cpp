#include "hypfred/expr.hpp"

#include <cctype>

namespace hypfred::expr {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

// Accepts  digits ['.' digits] [exponent]  or  '.' digits [exponent].
// A '.' must be followed by a digit.
std::size_t scan_number(std::string_view s, std::size_t pos) {
    std::size_t i = pos;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i < s.size() && s[i] == '.') {
        if (i + 1 >= s.size() || !is_digit(s[i + 1])) throw LexError(i, "malformed number");
        ++i;
        while (i < s.size() && is_digit(s[i])) ++i;
        if (i < s.size() && s[i] == '.') throw LexError(i, "malformed number");
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
            while (j < s.size() && is_digit(s[j])) ++j;
            i = j;
        }
    }
    return i;
}

} // namespace

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < source.size()) {
        const char c = source[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (is_digit(c) || c == '.') {
            const std::size_t end = scan_number(source, i);
            out.push_back({TokenKind::number, std::string(source.substr(i, end - i)), i});
            i = end;
        } else if (is_ident_start(c)) {
            std::size_t end = i;
            while (end < source.size() && is_ident_char(source[end])) ++end;
            out.push_back({TokenKind::identifier, std::string(source.substr(i, end - i)), i});
            i = end;
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({TokenKind::op, std::string(1, c), i});
            ++i;
        } else if (c == '(' || c == ')') {
            out.push_back({TokenKind::paren, std::string(1, c), i});
            ++i;
        } else if (c == ',') {
            out.push_back({TokenKind::comma, ",", i});
            ++i;
        } else {
            throw LexError(i, "unexpected character");
        }
    }
    return out;
}

} // namespace hypfred::expr
