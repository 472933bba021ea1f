#include "texcas/latex_parser.hpp"

#include "texcas/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>

namespace texcas {
namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

} // namespace

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < source.size()) {
        char c = source[i];
        std::size_t start = i;
        if (c == '\\') {
            ++i;
            if (i >= source.size())
                throw ParseError("dangling backslash", start);
            if (is_letter(source[i])) {
                std::size_t name_start = i;
                while (i < source.size() && is_letter(source[i])) ++i;
                out.push_back({TokenKind::Command,
                               std::string(source.substr(name_start, i - name_start)), start});
            } else {
                out.push_back({TokenKind::Command, std::string(1, source[i]), start});
                ++i;
            }
        } else if (is_space(c)) {
            while (i < source.size() && is_space(source[i])) ++i;
            out.push_back({TokenKind::Whitespace, std::string(source.substr(start, i - start)),
                           start});
        } else if (is_digit(c)) {
            while (i < source.size() && is_digit(source[i])) ++i;
            out.push_back({TokenKind::Digits, std::string(source.substr(start, i - start)),
                           start});
        } else if (is_letter(c)) {
            // A letter run may continue with digits: "b4" is one identifier.
            ++i;
            while (i < source.size() && (is_letter(source[i]) || is_digit(source[i]))) ++i;
            out.push_back({TokenKind::Letters, std::string(source.substr(start, i - start)),
                           start});
        } else if (c == '@') {
            out.push_back({TokenKind::At, "@", start});
            ++i;
        } else if (c == '{') {
            out.push_back({TokenKind::BraceOpen, "{", start});
            ++i;
        } else if (c == '}') {
            out.push_back({TokenKind::BraceClose, "}", start});
            ++i;
        } else if (c == '[') {
            out.push_back({TokenKind::BracketOpen, "[", start});
            ++i;
        } else if (c == ']') {
            out.push_back({TokenKind::BracketClose, "]", start});
            ++i;
        } else {
            out.push_back({TokenKind::Symbol, std::string(1, c), start});
            ++i;
        }
    }
    return out;
}

namespace {

class Parser {
public:
    Parser(std::vector<Token> tokens, const Lexicon& lexicon)
        : toks_(std::move(tokens)), lex_(lexicon) {}

    PomPtr run() {
        auto root = parse_sequence(/*inside_brace=*/false, /*inside_balanced=*/false);
        if (pos_ < toks_.size())
            throw ParseError("unbalanced '}'", toks_[pos_].position);
        return root;
    }

private:
    std::vector<Token> toks_;
    const Lexicon& lex_;
    std::size_t pos_ = 0;
    bool pending_space_ = false;

    bool done() const { return pos_ >= toks_.size(); }
    const Token& peek() const { return toks_[pos_]; }
    std::size_t here() const { return done() ? npos_position() : toks_[pos_].position; }
    std::size_t npos_position() const {
        return toks_.empty() ? 0 : toks_.back().position + toks_.back().text.size();
    }

    PomPtr make(PomKind kind, std::string text) {
        auto node = std::make_unique<PomNode>(kind, std::move(text));
        node->space_before = pending_space_;
        pending_space_ = false;
        return node;
    }

    // Parses sibling nodes until the enclosing delimiter.
    PomPtr parse_sequence(bool inside_brace, bool inside_balanced) {
        auto seq = std::make_unique<PomNode>(PomKind::Sequence, "");
        while (!done()) {
            const Token& tok = peek();
            if (tok.kind == TokenKind::BraceClose) {
                if (inside_brace) { ++pos_; return seq; }
                return seq; // top level: caller reports the imbalance
            }
            if (tok.kind == TokenKind::Command && tok.text == "right") {
                if (!inside_balanced)
                    throw ParseError("\\right without matching \\left", tok.position);
                return seq;
            }
            if (tok.kind == TokenKind::Whitespace) {
                pending_space_ = true;
                ++pos_;
                continue;
            }
            seq->children.push_back(parse_item(*seq));
        }
        if (inside_brace) throw ParseError("missing '}'", npos_position());
        if (inside_balanced) throw ParseError("missing \\right", npos_position());
        return seq;
    }

    // Parses one node. `parent` is consulted for script-stacking checks.
    PomPtr parse_item(PomNode& parent) {
        const Token tok = peek();
        switch (tok.kind) {
        case TokenKind::Command:
            return parse_command();
        case TokenKind::Letters: {
            ++pos_;
            return make(PomKind::Alphanumeric, tok.text);
        }
        case TokenKind::Digits: {
            ++pos_;
            return make(PomKind::Number, tok.text);
        }
        case TokenKind::At: {
            ++pos_;
            return make(PomKind::At, "@");
        }
        case TokenKind::BraceOpen: {
            ++pos_;
            auto space = pending_space_;
            pending_space_ = false;
            auto group = parse_sequence(/*inside_brace=*/true, /*inside_balanced=*/false);
            group->space_before = space;
            return group;
        }
        case TokenKind::BracketOpen: {
            ++pos_;
            return make(PomKind::Symbol, "[");
        }
        case TokenKind::BracketClose: {
            ++pos_;
            return make(PomKind::Symbol, "]");
        }
        case TokenKind::Symbol: {
            if (tok.text == "^" || tok.text == "_") return parse_script(parent, tok);
            ++pos_;
            return make(PomKind::Symbol, tok.text);
        }
        case TokenKind::Whitespace:
        case TokenKind::BraceClose:
            break;
        }
        throw ParseError("unexpected token '" + tok.text + "'", tok.position);
    }

    PomPtr parse_script(PomNode& parent, const Token& tok) {
        PomKind kind = tok.text == "^" ? PomKind::Caret : PomKind::Underscore;
        if (parent.children.empty())
            throw ParseError("script '" + tok.text + "' has no base", tok.position);
        if (parent.children.back()->kind == kind)
            throw ParseError(kind == PomKind::Caret ? "double superscript"
                                                    : "double subscript",
                             tok.position);
        ++pos_;
        auto node = make(kind, tok.text);
        node->children.push_back(parse_script_argument(tok));
        return node;
    }

    // A script takes one braced group or a single character / command.
    // Multi-character letter or digit runs split: only the first character
    // belongs to the script ("t^uv" raises only the 'u').
    PomPtr parse_script_argument(const Token& script_tok) {
        while (!done() && peek().kind == TokenKind::Whitespace) ++pos_;
        if (done())
            throw ParseError("script '" + script_tok.text + "' has no argument",
                             script_tok.position);
        Token& tok = toks_[pos_];
        switch (tok.kind) {
        case TokenKind::BraceOpen: {
            ++pos_;
            return parse_sequence(/*inside_brace=*/true, /*inside_balanced=*/false);
        }
        case TokenKind::Letters:
        case TokenKind::Digits: {
            PomKind leaf = tok.kind == TokenKind::Letters ? PomKind::Alphanumeric
                                                          : PomKind::Number;
            std::string first(1, tok.text.front());
            if (tok.text.size() == 1) {
                ++pos_;
            } else {
                // Keep the remainder in place as the following token.
                tok.text.erase(tok.text.begin());
                ++tok.position;
                if (leaf == PomKind::Alphanumeric && is_digit(tok.text.front()))
                    tok.kind = TokenKind::Digits;
            }
            return make(leaf, first);
        }
        case TokenKind::Command:
            return parse_command();
        case TokenKind::At: {
            ++pos_;
            return make(PomKind::At, "@");
        }
        case TokenKind::BracketOpen:
        case TokenKind::BracketClose:
        case TokenKind::Symbol: {
            std::string text = tok.text;
            ++pos_;
            return make(PomKind::Symbol, text);
        }
        case TokenKind::Whitespace:
        case TokenKind::BraceClose:
            break;
        }
        throw ParseError("script '" + script_tok.text + "' has no argument",
                         script_tok.position);
    }

    PomPtr parse_command() {
        const Token tok = peek();
        ++pos_;
        if (tok.text == "frac" || tok.text == "ifrac") {
            auto node = make(PomKind::Fraction, tok.text);
            node->children.push_back(require_group(tok));
            node->children.push_back(require_group(tok));
            return node;
        }
        if (tok.text == "binom") {
            auto node = make(PomKind::Binomial, tok.text);
            node->children.push_back(require_group(tok));
            node->children.push_back(require_group(tok));
            return node;
        }
        if (tok.text == "sqrt") {
            bool saved_space = pending_space_;
            skip_whitespace();
            if (!done() && peek().kind == TokenKind::BracketOpen) {
                ++pos_;
                auto node = std::make_unique<PomNode>(PomKind::Radical, tok.text);
                node->space_before = saved_space;
                pending_space_ = false;
                node->children.push_back(parse_bracket_group(tok));
                node->children.push_back(require_group(tok));
                return node;
            }
            pending_space_ = saved_space;
            auto node = make(PomKind::SquareRoot, tok.text);
            node->children.push_back(require_group(tok));
            return node;
        }
        if (tok.text == "left") {
            skip_whitespace();
            if (done())
                throw ParseError("\\left without a delimiter", tok.position);
            std::string open = read_delimiter();
            auto node = make(PomKind::BalancedExpression, "");
            auto inner = parse_sequence(/*inside_brace=*/false, /*inside_balanced=*/true);
            if (done())
                throw ParseError("missing \\right", npos_position());
            ++pos_; // the \right command
            skip_whitespace();
            if (done())
                throw ParseError("\\right without a delimiter", npos_position());
            std::string close = read_delimiter();
            node->text = open + "\x01" + close;
            for (auto& child : inner->children) node->children.push_back(std::move(child));
            return node;
        }
        if (tok.text == "right")
            throw ParseError("\\right without matching \\left", tok.position);

        if (lex_.knows_macro(tok.text)) {
            auto node = make(PomKind::SemanticMacro, tok.text);
            for (int d = 0; d < 4 && !node->tag; ++d)
                node->tag = lex_.lookup(tok.text, d);
            return node;
        }
        return make(PomKind::GenericMacro, tok.text);
    }

    std::string read_delimiter() {
        const Token& tok = peek();
        std::string text;
        switch (tok.kind) {
        case TokenKind::Command: text = "\\" + tok.text; break;
        case TokenKind::Symbol:
        case TokenKind::BracketOpen:
        case TokenKind::BracketClose: text = tok.text; break;
        case TokenKind::Letters:
        case TokenKind::Digits:
            throw ParseError("'" + tok.text + "' is not a delimiter", tok.position);
        default:
            throw ParseError("expected a delimiter", tok.position);
        }
        ++pos_;
        return text;
    }

    void skip_whitespace() {
        while (!done() && peek().kind == TokenKind::Whitespace) {
            pending_space_ = true;
            ++pos_;
        }
    }

    PomPtr require_group(const Token& owner) {
        skip_whitespace();
        if (done() || peek().kind != TokenKind::BraceOpen)
            throw ParseError("\\" + owner.text + " expects a braced argument",
                             done() ? npos_position() : peek().position);
        ++pos_;
        pending_space_ = false;
        return parse_sequence(/*inside_brace=*/true, /*inside_balanced=*/false);
    }

    // Content of \sqrt[...]: read up to the matching ']' (no nesting of
    // bare brackets inside the index in practice).
    PomPtr parse_bracket_group(const Token& owner) {
        auto seq = std::make_unique<PomNode>(PomKind::Sequence, "");
        int depth = 1;
        while (!done()) {
            const Token& tok = peek();
            if (tok.kind == TokenKind::BracketOpen) ++depth;
            if (tok.kind == TokenKind::BracketClose) {
                --depth;
                if (depth == 0) { ++pos_; return seq; }
            }
            if (tok.kind == TokenKind::Whitespace) {
                pending_space_ = true;
                ++pos_;
                continue;
            }
            seq->children.push_back(parse_item(*seq));
        }
        throw ParseError("\\" + owner.text + " has an unclosed '['", npos_position());
    }
};

const char* kind_name(PomKind kind) {
    switch (kind) {
    case PomKind::Sequence: return "sequence";
    case PomKind::BalancedExpression: return "balanced";
    case PomKind::Fraction: return "fraction";
    case PomKind::Binomial: return "binomial";
    case PomKind::SquareRoot: return "sqrt";
    case PomKind::Radical: return "radical";
    case PomKind::Underscore: return "subscript";
    case PomKind::Caret: return "superscript";
    case PomKind::SemanticMacro: return "semantic-macro";
    case PomKind::GenericMacro: return "macro";
    case PomKind::Alphanumeric: return "alphanumeric";
    case PomKind::Number: return "number";
    case PomKind::Symbol: return "symbol";
    case PomKind::At: return "at";
    }
    return "?";
}

} // namespace

PomPtr parse_latex(const std::vector<Token>& tokens, const Lexicon& lexicon) {
    return Parser(tokens, lexicon).run();
}

PomPtr parse_latex(std::string_view source, const Lexicon& lexicon) {
    return parse_latex(tokenize(source), lexicon);
}

std::string dump_tree_text(const PomNode& node, int indent) {
    std::string out(static_cast<std::size_t>(indent) * 2, ' ');
    out += kind_name(node.kind);
    if (!node.text.empty()) {
        std::string shown = node.text;
        for (char& c : shown)
            if (c == '\x01') c = ' ';
        out += " \"" + shown + "\"";
    }
    out += "\n";
    for (const auto& child : node.children) out += dump_tree_text(*child, indent + 1);
    return out;
}

namespace {

nlohmann::json tree_to_json(const PomNode& n) {
    nlohmann::json obj;
    obj["kind"] = kind_name(n.kind);
    if (!n.text.empty()) obj["text"] = n.text;
    if (n.space_before) obj["space_before"] = true;
    if (!n.children.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : n.children) arr.push_back(tree_to_json(*c));
        obj["children"] = std::move(arr);
    }
    return obj;
}

} // namespace

std::string dump_tree_json(const PomNode& node) {
    return tree_to_json(node).dump(2);
}

} // namespace texcas
