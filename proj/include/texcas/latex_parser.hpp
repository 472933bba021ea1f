#pragma once

#include "texcas/lexicon.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace texcas {

enum class TokenKind {
    Command,      // backslash + name
    Letters,      // alphabetic run, may continue with digits ("b4")
    Digits,       // digit run
    Symbol,       // single non-alphanumeric character
    Whitespace,   // run of blanks / tabs / newlines
    At,           // '@'
    BraceOpen,    // '{'
    BraceClose,   // '}'
    BracketOpen,  // '['
    BracketClose, // ']'
};

struct Token {
    TokenKind kind;
    std::string text;      // command text excludes the backslash
    std::size_t position;  // byte offset in the source
};

std::vector<Token> tokenize(std::string_view source);

enum class PomKind {
    Sequence,
    BalancedExpression, // \left ... \right
    Fraction,
    Binomial,
    SquareRoot,
    Radical,            // \sqrt[index]{radicand}
    Underscore,
    Caret,
    SemanticMacro,
    GenericMacro,
    Alphanumeric,
    Number,
    Symbol,
    At,
};

// A parse-tree node. Macro arguments are *following siblings* of the macro
// leaf, not children; only structural nodes (fractions, scripts, groups)
// carry children.
struct PomNode {
    PomKind kind;
    std::string text;                      // leaf payload / delimiters
    std::vector<std::unique_ptr<PomNode>> children;
    const MacroEntry* tag = nullptr;       // SemanticMacro: one known variant
    bool space_before = false;             // whitespace preceded this node

    PomNode(PomKind k, std::string t) : kind(k), text(std::move(t)) {}
};

using PomPtr = std::unique_ptr<PomNode>;

PomPtr parse_latex(const std::vector<Token>& tokens, const Lexicon& lexicon);
PomPtr parse_latex(std::string_view source, const Lexicon& lexicon);

// Diagnostic renderings used by the dump-tree command and tests.
std::string dump_tree_text(const PomNode& node, int indent = 0);
std::string dump_tree_json(const PomNode& node);

} // namespace texcas
