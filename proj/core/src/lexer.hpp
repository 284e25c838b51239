#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pinv::detail {

struct Token {
    enum class Kind { Ident, Int, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

/// Tokenizes program and specification text. `#` starts a line comment.
std::vector<Token> tokenize(std::string_view text);

} // namespace pinv::detail
