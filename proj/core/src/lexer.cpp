#include "lexer.hpp"

#include <array>
#include <cctype>

#include "pinv/errors.hpp"

namespace pinv::detail {

std::vector<Token> tokenize(std::string_view text)
{
    static constexpr std::array<std::string_view, 9> twoChar{":=", "!=", "<=", ">=", "->", "&&", "||", "..", "<-"};
    static constexpr std::string_view oneChar = "(){}[],;:=<>+-!'*|@";

    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            t.kind = Token::Kind::Int;
            t.text = std::string(text.substr(i, j - i));
            advance(j - i);
        } else {
            std::string_view rest = text.substr(i);
            bool matched = false;
            for (auto op : twoChar) {
                if (rest.starts_with(op)) {
                    t.kind = Token::Kind::Sym;
                    t.text = std::string(op);
                    advance(2);
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (oneChar.find(c) == std::string_view::npos)
                    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
                t.kind = Token::Kind::Sym;
                t.text = std::string(1, c);
                advance(1);
            }
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

} // namespace pinv::detail
