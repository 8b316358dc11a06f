#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "trojanscope/lexer.hpp"

using namespace trojanscope;

namespace {

std::vector<std::string> token_texts(std::string_view src, Language lang,
                                     bool significant_only = true) {
    std::vector<std::string> out;
    for (const Token& t : lex(src, lang)) {
        if (significant_only &&
            (t.kind == TokKind::Whitespace || t.kind == TokKind::LineComment ||
             t.kind == TokKind::BlockComment)) {
            continue;
        }
        out.emplace_back(src.substr(t.begin, t.end - t.begin));
    }
    return out;
}

std::vector<std::string> local_names(std::string_view src, Language lang) {
    const auto tokens = lex(src, lang);
    std::vector<std::string> out;
    for (const auto& d : find_local_declarations(src, tokens, lang)) {
        out.emplace_back(d.name);
    }
    return out;
}

}  // namespace

TEST_CASE("lexing covers the token classes") {
    const std::string src = "int f(){ int x = 0x1F; // note\n s = \"a{b\"; /* y */ c = 'z'; }";
    const auto tokens = lex(src, Language::CCpp);

    // concatenation of all token spans reproduces the input exactly
    std::string rebuilt;
    for (const Token& t : tokens) rebuilt += src.substr(t.begin, t.end - t.begin);
    CHECK(rebuilt == src);

    const auto texts = token_texts(src, Language::CCpp);
    CHECK(texts == std::vector<std::string>{"int", "f", "(", ")", "{", "int", "x", "=",
                                            "0x1F", ";", "s", "=", "\"a{b\"", ";", "c", "=",
                                            "'z'", ";", "}"});
}

TEST_CASE("braces inside literals and comments are not punctuation") {
    CHECK(brace_balance("int f(){return \"}}}\";}", Language::CCpp) == 0);
    CHECK(brace_balance("/* } */ { '{'", Language::CCpp) == 1);
    CHECK(brace_balance("// }\n{", Language::Java) == 1);
    CHECK(brace_balance("char c = '{';", Language::CCpp) == 0);
}

TEST_CASE("keywords and identifiers are distinguished per language") {
    CHECK(is_keyword("while", Language::CCpp));
    CHECK(is_keyword("instanceof", Language::Java));
    CHECK_FALSE(is_keyword("instanceof", Language::CCpp));
    CHECK(is_primitive_type("boolean", Language::Java));
    CHECK_FALSE(is_primitive_type("boolean", Language::CCpp));
    CHECK(is_primitive_type("unsigned", Language::CCpp));
}

TEST_CASE("local declaration heuristic") {
    SUBCASE("simple local") {
        CHECK(local_names("int f(){int x=1; return x;}", Language::CCpp) ==
              std::vector<std::string>{"x"});
    }
    SUBCASE("parameters are not locals") {
        CHECK(local_names("int f(int a, int b){return a+b;}", Language::CCpp).empty());
    }
    SUBCASE("keyword pairs are skipped") {
        CHECK(local_names("int f(){return x;}", Language::CCpp).empty());
    }
    SUBCASE("pointer and reference declarators") {
        CHECK(local_names("void f(){char *buf = 0; int &r = x;}", Language::CCpp) ==
              std::vector<std::string>{"buf", "r"});
    }
    SUBCASE("typedef-style and multi-keyword types") {
        CHECK(local_names("void f(){size_t count = 0; unsigned long total = 1;}",
                          Language::CCpp) == std::vector<std::string>{"count", "total"});
    }
    SUBCASE("java arrays and class types") {
        CHECK(local_names("void f(){int[] a = null; String s = \"x\";}", Language::Java) ==
              std::vector<std::string>{"a", "s"});
    }
    SUBCASE("for-loop induction variable") {
        CHECK(local_names("void f(){for(int i=0;i<9;i++){}}", Language::CCpp) ==
              std::vector<std::string>{"i"});
    }
    SUBCASE("declarations inside strings or comments do not count") {
        CHECK(local_names("void f(){s = \"int x = 1;\"; /* int y = 2; */}", Language::CCpp)
                  .empty());
    }
    SUBCASE("array declaration") {
        CHECK(local_names("void f(){int a[10];}", Language::CCpp) ==
              std::vector<std::string>{"a"});
    }
}
