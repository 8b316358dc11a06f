#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace trojanscope {

// Lightweight token scanner for C/C++ and Java function snippets. It knows
// just enough to keep trigger injection out of string/char literals and
// comments and to track brace depth; it is not a grammar. C++ raw string
// literals and Java text blocks are lexed as ordinary tokens.

enum class Language { CCpp, Java };

enum class TokKind {
    Identifier,
    Keyword,
    Number,
    String,
    CharLit,
    LineComment,
    BlockComment,
    Punct,  // single character
    Whitespace,
};

struct Token {
    TokKind kind;
    std::size_t begin = 0;  // [begin, end) into the source
    std::size_t end = 0;
};

std::vector<Token> lex(std::string_view src, Language lang);

bool is_keyword(std::string_view word, Language lang);

/// Keywords that may start a local declaration (int, double, boolean, ...).
bool is_primitive_type(std::string_view word, Language lang);

/// Net brace balance counted over Punct tokens only, so braces inside
/// literals and comments do not count.
int brace_balance(std::string_view src, Language lang);

/// A local variable found by the declaration heuristic: a type token
/// (primitive keyword or non-keyword identifier, optionally followed by
/// '*'/'&' in C/C++ or '[]' in Java) followed by a non-keyword identifier,
/// at brace depth >= 1, where the next significant token is one of
/// '=' ';' ',' '['. Multi-declarator tails ("int a, b;") and generic types
/// ("List<T> x") are not discovered; that is an accepted heuristic limit.
struct LocalDecl {
    std::string_view name;
    std::size_t token_index = 0;  // index of the name token in the lex stream
};

std::vector<LocalDecl> find_local_declarations(std::string_view src,
                                               std::span<const Token> tokens, Language lang);

}  // namespace trojanscope
