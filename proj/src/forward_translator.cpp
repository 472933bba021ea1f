#include "texcas/forward_translator.hpp"

#include "texcas/errors.hpp"

#include <cctype>
#include <span>
#include <vector>

namespace texcas {

std::string target_key(Target target) {
    return target == Target::Maple ? "maple" : "mathematica";
}

namespace {

using NodeSpan = std::span<const PomNode* const>;

std::vector<const PomNode*> to_ptrs(const std::vector<PomPtr>& children) {
    std::vector<const PomNode*> out;
    out.reserve(children.size());
    for (const auto& c : children) out.push_back(c.get());
    return out;
}

bool is_symbol(const PomNode& node, const char* text) {
    return node.kind == PomKind::Symbol && node.text == text;
}

bool is_word_atom(const std::string& text) {
    if (text.empty()) return false;
    for (char c : text)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// True when `text` from `from` onward is one balanced (...) or [...] run
// ending exactly at the end of the string.
bool wrapped_from(const std::string& text, std::size_t from) {
    if (from >= text.size()) return false;
    char open = text[from];
    char close = open == '(' ? ')' : open == '[' ? ']' : '\0';
    if (close == '\0') return false;
    int depth = 0;
    for (std::size_t i = from; i < text.size(); ++i) {
        if (text[i] == open) ++depth;
        else if (text[i] == close) {
            --depth;
            if (depth == 0) return i + 1 == text.size();
        }
    }
    return false;
}

// Self-delimiting translations never need extra parentheses: single word
// atoms, fully wrapped groups, and function calls f(...) / f[...].
bool looks_self_delimited(const std::string& text) {
    if (is_word_atom(text)) return true;
    if (wrapped_from(text, 0)) return true;
    std::size_t i = 0;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
    return i > 0 && wrapped_from(text, i);
}

std::size_t count_nodes(const PomNode& node) {
    std::size_t n = 1;
    for (const auto& c : node.children) n += count_nodes(*c);
    return n;
}

class Translator {
public:
    Translator(Target target, const Lexicon& lexicon, VisitAudit* audit)
        : target_(target), key_(target_key(target)), lex_(lexicon), audit_(audit) {}

    TranslationResult run(const PomNode& root) {
        if (audit_) {
            audit_->nodes_total = count_nodes(root);
            audit_->nodes_visited = 0;
        }
        visit(root);
        TranslationResult result;
        result.target = target_;
        auto ptrs = to_ptrs(root.children);
        result.output = join(translate_children(ptrs));
        result.info_log = std::move(log_);
        return result;
    }

private:
    Target target_;
    std::string key_;
    const Lexicon& lex_;
    VisitAudit* audit_;
    std::vector<InfoRecord> log_;

    void visit(const PomNode&) {
        if (audit_) ++audit_->nodes_visited;
    }

    std::string mult_symbol() const { return target_ == Target::Maple ? "*" : " "; }

    // --- joining ---------------------------------------------------------

    std::string join(const std::vector<TeoFragment>& fragments) const {
        std::string out;
        for (std::size_t i = 0; i < fragments.size(); ++i) {
            const TeoFragment& f = fragments[i];
            if (i > 0 && fragments[i - 1].role == FragmentRole::Operand &&
                f.role == FragmentRole::Operand)
                out += mult_symbol();
            if (f.role == FragmentRole::Relation)
                out += " " + f.text + " ";
            else
                out += f.text;
        }
        return out;
    }

    std::string translate_argument(const PomNode& node) {
        if (node.kind == PomKind::Sequence) {
            visit(node);
            auto ptrs = to_ptrs(node.children);
            return join(translate_children(ptrs));
        }
        const PomNode* one[1] = {&node};
        std::vector<TeoFragment> frags;
        std::size_t i = 0;
        translate_at(NodeSpan(one, 1), i, frags);
        return join(frags);
    }

    std::vector<TeoFragment> translate_children(NodeSpan children) {
        std::vector<TeoFragment> out;
        std::size_t i = 0;
        while (i < children.size()) translate_at(children, i, out);
        return out;
    }

    // Translates the node at `i`, consuming any siblings that belong to it.
    void translate_at(NodeSpan children, std::size_t& i, std::vector<TeoFragment>& out) {
        const PomNode& node = *children[i];
        switch (node.kind) {
        case PomKind::SemanticMacro:
            translate_macro(children, i, out);
            return;
        case PomKind::GenericMacro:
            visit(node);
            out.push_back(generic_macro_fragment(node));
            ++i;
            return;
        case PomKind::Alphanumeric:
            visit(node);
            for (char c : node.text)
                out.push_back({std::string(1, c), true, FragmentRole::Operand});
            ++i;
            return;
        case PomKind::Number: {
            visit(node);
            std::string text = node.text;
            if (i + 2 < children.size() && is_symbol(*children[i + 1], ".") &&
                children[i + 2]->kind == PomKind::Number) {
                visit(*children[i + 1]);
                visit(*children[i + 2]);
                text += "." + children[i + 2]->text;
                i += 2;
            }
            out.push_back({text, true, FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::Symbol:
            translate_symbol(children, i, out);
            return;
        case PomKind::Caret:
        case PomKind::Underscore:
            visit(node);
            apply_script(node, out);
            ++i;
            return;
        case PomKind::Fraction: {
            visit(node);
            std::string num = translate_argument(*node.children[0]);
            std::string den = translate_argument(*node.children[1]);
            out.push_back({"(" + num + ")/(" + den + ")", false, FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::Binomial: {
            visit(node);
            std::string a = translate_argument(*node.children[0]);
            std::string b = translate_argument(*node.children[1]);
            std::string text = target_ == Target::Maple
                                   ? "binomial(" + a + "," + b + ")"
                                   : "Binomial[" + a + "," + b + "]";
            out.push_back({text, true, FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::SquareRoot: {
            visit(node);
            std::string x = translate_argument(*node.children[0]);
            std::string text = target_ == Target::Maple ? "sqrt(" + x + ")"
                                                        : "Sqrt[" + x + "]";
            out.push_back({text, true, FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::Radical: {
            visit(node);
            std::string index = translate_argument(*node.children[0]);
            std::string radicand = translate_argument(*node.children[1]);
            out.push_back({"(" + radicand + ")^(1/(" + index + "))", false,
                           FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::BalancedExpression: {
            visit(node);
            auto ptrs = to_ptrs(node.children);
            std::string inner = join(translate_children(ptrs));
            out.push_back({"(" + inner + ")", true, FragmentRole::Operand});
            ++i;
            return;
        }
        case PomKind::Sequence: {
            visit(node);
            auto ptrs = to_ptrs(node.children);
            auto frags = translate_children(ptrs);
            if (frags.size() == 1) {
                out.push_back(std::move(frags.front()));
            } else {
                // A braced group acts as one operand; parenthesize so the
                // surrounding multiplication cannot rebind its contents.
                out.push_back({"(" + join(frags) + ")", true, FragmentRole::Operand});
            }
            ++i;
            return;
        }
        case PomKind::At:
            throw TranslationError("stray @ outside any macro argument list");
        }
        throw TranslationError("untranslatable node");
    }

    // --- symbols and operators --------------------------------------------

    void translate_symbol(NodeSpan children, std::size_t& i, std::vector<TeoFragment>& out) {
        const PomNode& node = *children[i];
        const std::string& s = node.text;
        if (s == "(" || s == "[") {
            translate_paren_run(children, i, out);
            return;
        }
        if (s == ")" || s == "]")
            throw TranslationError("mismatched parentheses: unexpected '" + s + "'");
        visit(node);
        if (s == "+" || s == "-" || s == "/" || s == "*") {
            out.push_back({s, false, FragmentRole::Operator});
            ++i;
            return;
        }
        if (s == "=" || s == "<" || s == ">") {
            out.push_back({s, false, FragmentRole::Relation});
            ++i;
            return;
        }
        if (s == ",") {
            out.push_back({",", false, FragmentRole::Operator});
            ++i;
            return;
        }
        if (s == "!") {
            if (out.empty() || out.back().role != FragmentRole::Operand)
                throw TranslationError("'!' has nothing to act on");
            bool dbl = false;
            if (i + 1 < children.size() && is_symbol(*children[i + 1], "!")) {
                visit(*children[i + 1]);
                dbl = true;
                ++i;
            }
            std::string fn = target_ == Target::Maple
                                 ? (dbl ? "doublefactorial" : "factorial")
                                 : (dbl ? "Factorial2" : "Factorial");
            std::string arg = out.back().text;
            out.back().text = target_ == Target::Maple ? fn + "(" + arg + ")"
                                                       : fn + "[" + arg + "]";
            out.back().grouped = true;
            ++i;
            return;
        }
        if (s == ".")
            throw TranslationError("'.' outside a decimal number");
        throw TranslationError("the symbol '" + s + "' has no translation");
    }

    void translate_paren_run(NodeSpan children, std::size_t& i, std::vector<TeoFragment>& out) {
        const std::string open = children[i]->text;
        const std::string close = open == "(" ? ")" : "]";
        visit(*children[i]);
        std::vector<std::string> stack{close};
        std::size_t j = i + 1;
        for (; j < children.size(); ++j) {
            const PomNode& n = *children[j];
            if (n.kind != PomKind::Symbol) continue;
            if (n.text == "(") stack.push_back(")");
            else if (n.text == "[") stack.push_back("]");
            else if (n.text == ")" || n.text == "]") {
                if (stack.back() != n.text)
                    throw TranslationError("mismatched parentheses: '" + open +
                                           "' closed by '" + n.text + "'");
                stack.pop_back();
                if (stack.empty()) break;
            }
        }
        if (j >= children.size())
            throw TranslationError("mismatched parentheses: unclosed '" + open + "'");
        visit(*children[j]);
        std::string inner = join(translate_children(children.subspan(i + 1, j - i - 1)));
        out.push_back({open + inner + close, true, FragmentRole::Operand});
        i = j + 1;
    }

    // --- scripts -----------------------------------------------------------

    void apply_script(const PomNode& node, std::vector<TeoFragment>& out) {
        if (out.empty() || out.back().role != FragmentRole::Operand)
            throw TranslationError(node.kind == PomKind::Caret
                                       ? "exponent without a base"
                                       : "subscript without a base");
        std::string script = translate_argument(*node.children[0]);
        TeoFragment base = std::move(out.back());
        out.pop_back();
        if (node.kind == PomKind::Caret) {
            std::string base_text = base.grouped ? base.text : "(" + base.text + ")";
            std::string exp_text = is_word_atom(script) ? script
                                 : wrapped_from(script, 0) ? script
                                                           : "(" + script + ")";
            out.push_back({base_text + "^" + exp_text, false, FragmentRole::Operand});
            return;
        }
        if (target_ == Target::Maple) {
            std::string base_text = base.grouped ? base.text : "(" + base.text + ")";
            std::string text = base_text + "[" + script + "]";
            out.push_back({text, looks_self_delimited(text), FragmentRole::Operand});
        } else {
            out.push_back({"Subscript[" + base.text + "," + script + "]", true,
                           FragmentRole::Operand});
        }
    }

    // --- macros ------------------------------------------------------------

    TeoFragment generic_macro_fragment(const PomNode& node) {
        const SymbolEntry* sym = lex_.symbol(node.text);
        if (!sym)
            throw TranslationError("the macro \\" + node.text + " is not in the lexicon");
        auto it = sym->renderings.find(key_);
        if (it == sym->renderings.end())
            throw TranslationError("\\" + node.text + " has no " + key_ + " rendering");
        if (sym->role == "operator") return {it->second, false, FragmentRole::Operator};
        if (sym->role == "ellipsis") return {it->second, false, FragmentRole::Ellipsis};
        if (sym->role == "relation") return {it->second, false, FragmentRole::Relation};
        return {it->second, true, FragmentRole::Operand};
    }

    TeoFragment macro_fragment(const MacroEntry& entry, std::span<const std::string> args,
                               const PomNode* deferred_exponent) {
        auto it = entry.targets.find(key_);
        if (it == entry.targets.end())
            throw TranslationError("\\" + entry.macro_name + " has no " + key_ +
                                   " translation");
        const TargetSpec& spec = it->second;
        std::string text = spec.pattern.fill(args);
        bool grouped;
        if (deferred_exponent) {
            std::string exp = translate_argument(*deferred_exponent->children[0]);
            text = "(" + text + ")^(" + exp + ")";
            grouped = false;
        } else {
            grouped = looks_self_delimited(text);
        }

        InfoRecord rec;
        rec.macro_name = entry.macro_name;
        rec.dlmf_link = entry.dlmf_link;
        rec.target_link = spec.link;
        rec.chosen_pattern = spec.source;
        rec.branch_cut_note = spec.note;
        for (const PatternAlternative& alt : spec.alternatives)
            rec.alternatives_not_taken.push_back(alt.source);
        log_.push_back(std::move(rec));
        return {text, grouped, FragmentRole::Operand};
    }

    void translate_macro(NodeSpan children, std::size_t& i, std::vector<TeoFragment>& out) {
        const PomNode& macro = *children[i];
        visit(macro);
        std::size_t j = i + 1;

        const PomNode* deferred_exponent = nullptr;
        if (j < children.size() && children[j]->kind == PomKind::Caret) {
            deferred_exponent = children[j];
            visit(*deferred_exponent);
            ++j;
        }

        std::vector<std::string> args;
        int opt_count = 0;
        while (j < children.size() && is_symbol(*children[j], "[")) {
            visit(*children[j]);
            std::size_t k = j + 1;
            int depth = 1;
            for (; k < children.size(); ++k) {
                if (is_symbol(*children[k], "[")) ++depth;
                if (is_symbol(*children[k], "]") && --depth == 0) break;
            }
            if (k >= children.size())
                throw TranslationError("\\" + macro.text +
                                       " has an unterminated optional argument");
            args.push_back(join(translate_children(children.subspan(j + 1, k - j - 1))));
            visit(*children[k]);
            ++opt_count;
            j = k + 1;
        }

        const MacroEntry* entry = lex_.lookup(macro.text, opt_count);
        if (!entry)
            throw TranslationError("\\" + macro.text + " with " + std::to_string(opt_count) +
                                   " optional argument(s) is not in the lexicon");

        for (int p = 0; p < entry->num_params; ++p) {
            if (j >= children.size())
                throw TranslationError("\\" + macro.text + " expects " +
                                       std::to_string(entry->num_params) + " parameter(s)");
            args.push_back(translate_argument(*children[j]));
            ++j;
        }

        int ats = 0;
        while (j < children.size() && children[j]->kind == PomKind::At) {
            visit(*children[j]);
            ++ats;
            ++j;
        }
        if (entry->num_ats == 0 && ats != 0)
            throw TranslationError("\\" + macro.text + " takes no @ sign");
        if (entry->num_ats > 0 && (ats < 1 || ats > entry->num_ats))
            throw TranslationError("\\" + macro.text + " takes 1.." +
                                   std::to_string(entry->num_ats) + " @ sign(s), found " +
                                   std::to_string(ats));

        for (int v = 0; v < entry->num_vars; ++v) {
            if (j >= children.size())
                throw TranslationError("\\" + macro.text + " expects " +
                                       std::to_string(entry->num_vars) +
                                       " argument(s) after @");
            args.push_back(translate_argument(*children[j]));
            ++j;
        }

        out.push_back(macro_fragment(*entry, args, deferred_exponent));
        i = j;
    }
};

} // namespace

TranslationResult translate(const PomNode& root, Target target, const Lexicon& lexicon,
                            VisitAudit* audit) {
    return Translator(target, lexicon, audit).run(root);
}

TranslationResult translate(const std::string& latex, Target target, const Lexicon& lexicon,
                            VisitAudit* audit) {
    auto root = parse_latex(latex, lexicon);
    return translate(*root, target, lexicon, audit);
}

} // namespace texcas
