#include "trojanscope/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace trojanscope {

namespace {

const std::unordered_set<std::string_view> kCCppKeywords{
    "alignas", "alignof", "and", "and_eq", "asm", "auto", "bitand", "bitor", "bool",
    "break", "case", "catch", "char", "char8_t", "char16_t", "char32_t", "class",
    "compl", "concept", "const", "consteval", "constexpr", "constinit", "const_cast",
    "continue", "co_await", "co_return", "co_yield", "decltype", "default", "delete",
    "do", "double", "dynamic_cast", "else", "enum", "explicit", "export", "extern",
    "false", "float", "for", "friend", "goto", "if", "inline", "int", "long",
    "mutable", "namespace", "new", "noexcept", "not", "not_eq", "nullptr", "operator",
    "or", "or_eq", "private", "protected", "public", "register", "reinterpret_cast",
    "requires", "restrict", "return", "short", "signed", "sizeof", "static",
    "static_assert", "static_cast", "struct", "switch", "template", "this",
    "thread_local", "throw", "true", "try", "typedef", "typeid", "typename", "union",
    "unsigned", "using", "virtual", "void", "volatile", "wchar_t", "while", "xor",
    "xor_eq", "_Bool", "_Complex", "_Imaginary",
};

const std::unordered_set<std::string_view> kJavaKeywords{
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
    "class", "const", "continue", "default", "do", "double", "else", "enum",
    "extends", "final", "finally", "float", "for", "goto", "if", "implements",
    "import", "instanceof", "int", "interface", "long", "native", "new", "package",
    "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient",
    "try", "void", "volatile", "while", "true", "false", "null", "var",
};

const std::unordered_set<std::string_view> kCCppPrimitives{
    "auto", "bool", "char", "char8_t", "char16_t", "char32_t", "double", "float",
    "int", "long", "short", "signed", "unsigned", "wchar_t", "_Bool",
};

const std::unordered_set<std::string_view> kJavaPrimitives{
    "boolean", "byte", "char", "double", "float", "int", "long", "short", "var",
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Skips a quoted literal starting at src[i] (a '"' or '\''); returns the
// index one past the closing quote. Unterminated literals run to the end.
std::size_t skip_quoted(std::string_view src, std::size_t i) {
    const char quote = src[i];
    ++i;
    while (i < src.size()) {
        if (src[i] == '\\' && i + 1 < src.size()) {
            i += 2;
            continue;
        }
        if (src[i] == quote) return i + 1;
        ++i;
    }
    return i;
}

}  // namespace

bool is_keyword(std::string_view word, Language lang) {
    const auto& set = lang == Language::Java ? kJavaKeywords : kCCppKeywords;
    return set.count(word) != 0;
}

bool is_primitive_type(std::string_view word, Language lang) {
    const auto& set = lang == Language::Java ? kJavaPrimitives : kCCppPrimitives;
    return set.count(word) != 0;
}

std::vector<Token> lex(std::string_view src, Language lang) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = src.size();

    while (i < n) {
        const std::size_t begin = i;
        const char c = src[i];

        if (std::isspace(static_cast<unsigned char>(c))) {
            while (i < n && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
            tokens.push_back({TokKind::Whitespace, begin, i});
            continue;
        }

        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            i += 2;
            while (i < n && src[i] != '\n') ++i;
            tokens.push_back({TokKind::LineComment, begin, i});
            continue;
        }

        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
            i = i + 1 < n ? i + 2 : n;
            tokens.push_back({TokKind::BlockComment, begin, i});
            continue;
        }

        if (c == '"') {
            i = skip_quoted(src, i);
            tokens.push_back({TokKind::String, begin, i});
            continue;
        }

        if (c == '\'') {
            i = skip_quoted(src, i);
            tokens.push_back({TokKind::CharLit, begin, i});
            continue;
        }

        if (ident_start(c)) {
            while (i < n && ident_cont(src[i])) ++i;
            const std::string_view word = src.substr(begin, i - begin);
            tokens.push_back({is_keyword(word, lang) ? TokKind::Keyword : TokKind::Identifier,
                              begin, i});
            continue;
        }

        if (digit(c) || (c == '.' && i + 1 < n && digit(src[i + 1]))) {
            ++i;
            while (i < n) {
                const char d = src[i];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
                    ++i;
                    continue;
                }
                // exponent signs: 1e+5, 0x1p-3
                if ((d == '+' || d == '-') && i > begin) {
                    const char prev = src[i - 1];
                    if (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P') {
                        ++i;
                        continue;
                    }
                }
                break;
            }
            tokens.push_back({TokKind::Number, begin, i});
            continue;
        }

        tokens.push_back({TokKind::Punct, begin, begin + 1});
        ++i;
    }

    return tokens;
}

int brace_balance(std::string_view src, Language lang) {
    int balance = 0;
    for (const Token& t : lex(src, lang)) {
        if (t.kind != TokKind::Punct) continue;
        const char c = src[t.begin];
        if (c == '{') ++balance;
        if (c == '}') --balance;
    }
    return balance;
}

std::vector<LocalDecl> find_local_declarations(std::string_view src,
                                               std::span<const Token> tokens, Language lang) {
    // Indices of significant tokens (everything but whitespace/comments).
    std::vector<std::size_t> sig;
    sig.reserve(tokens.size());
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const TokKind kind = tokens[k].kind;
        if (kind == TokKind::Whitespace || kind == TokKind::LineComment ||
            kind == TokKind::BlockComment) {
            continue;
        }
        sig.push_back(k);
    }

    const auto text = [&](std::size_t k) {
        return src.substr(tokens[k].begin, tokens[k].end - tokens[k].begin);
    };
    const auto punct = [&](std::size_t k, char c) {
        return tokens[k].kind == TokKind::Punct && src[tokens[k].begin] == c;
    };

    std::vector<LocalDecl> locals;
    int depth = 0;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const std::size_t k = sig[s];
        if (punct(k, '{')) {
            ++depth;
            continue;
        }
        if (punct(k, '}')) {
            --depth;
            continue;
        }
        if (depth < 1) continue;

        const bool type_like =
            (tokens[k].kind == TokKind::Keyword && is_primitive_type(text(k), lang)) ||
            tokens[k].kind == TokKind::Identifier;
        if (!type_like) continue;

        // Skip declarator decoration between type and name.
        std::size_t s2 = s + 1;
        if (lang == Language::CCpp) {
            while (s2 < sig.size() && (punct(sig[s2], '*') || punct(sig[s2], '&'))) ++s2;
        } else {
            while (s2 + 1 < sig.size() && punct(sig[s2], '[') && punct(sig[s2 + 1], ']')) {
                s2 += 2;
            }
        }
        if (s2 >= sig.size()) continue;

        const std::size_t name_k = sig[s2];
        if (tokens[name_k].kind != TokKind::Identifier) continue;

        if (s2 + 1 >= sig.size()) continue;
        const std::size_t after_k = sig[s2 + 1];
        const bool closes = punct(after_k, '=') || punct(after_k, ';') ||
                            punct(after_k, ',') || punct(after_k, '[');
        if (!closes) continue;

        locals.push_back({text(name_k), name_k});
    }
    return locals;
}

}  // namespace trojanscope
