#ifndef GPP_LEXER_HPP
#define GPP_LEXER_HPP

#include <cctype>
#include <string>

#include "gpp/strips.hpp"

// Shared line tokenizer for the toolkit's small line-oriented grammars.

namespace gpp {

struct Tokenizer {
    const std::string &line;
    int line_no;
    size_t pos = 0;

    Tokenizer(const std::string &line, int line_no) : line(line), line_no(line_no) {}

    void skip_ws() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t'))
            ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= line.size();
    }
    char peek() {
        skip_ws();
        return pos < line.size() ? line[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string &msg) {
        throw ParseError(msg, line_no, static_cast<int>(pos) + 1);
    }
    static bool sym_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
               c == '$' || c == '*' || c == '!' || c == '=' || c == '>' || c == '+';
    }
    std::string symbol() {
        skip_ws();
        size_t start = pos;
        while (pos < line.size() && sym_char(line[pos]))
            ++pos;
        if (pos == start)
            fail("expected symbol");
        return line.substr(start, pos - start);
    }
    void expect(char c) {
        skip_ws();
        if (pos >= line.size() || line[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }
    bool accept(char c) {
        skip_ws();
        if (pos < line.size() && line[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
};

}  // namespace gpp

#endif
