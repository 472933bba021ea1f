#include "texcas/backward_translator.hpp"

#include "texcas/errors.hpp"

#include <cctype>

namespace texcas {
namespace {

bool is_word_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// Splits "name(arg,arg,...)" at the top level; empty result when the source
// is not a plain function call.
struct CallShape {
    std::string name;
    std::vector<std::string> args;
    bool ok = false;
};

CallShape dissect_call(const std::string& source) {
    CallShape shape;
    std::size_t open = source.find('(');
    if (open == std::string::npos || source.back() != ')') return shape;
    shape.name = source.substr(0, open);
    if (!is_word_name(shape.name)) return shape;
    int depth = 0;
    std::string current;
    for (std::size_t i = open; i + 1 < source.size(); ++i) {
        char c = source[i];
        if (c == '(' || c == '[') {
            ++depth;
            if (i == open) continue;
        } else if (c == ')' || c == ']') {
            --depth;
        } else if (c == ',' && depth == 1) {
            shape.args.push_back(current);
            current.clear();
            continue;
        }
        if (i != open) current += c;
    }
    shape.args.push_back(current);
    if (shape.args.size() == 1 && shape.args[0].empty()) shape.args.clear();
    shape.ok = true;
    return shape;
}

std::string trimmed(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool plain_slot(const std::string& s, int& slot) {
    if (s.size() < 2 || s[0] != '$') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    slot = std::stoi(s.substr(1));
    return true;
}

} // namespace

BackwardIndex BackwardIndex::build(const Lexicon& lexicon) {
    BackwardIndex index;
    for (const MacroEntry& entry : lexicon.all_entries()) {
        if (!entry.backward_pattern) continue;
        auto target = entry.targets.find("maple");
        if (target == entry.targets.end())
            throw LoadError("\\" + entry.macro_name +
                            " has a backward pattern but no maple forward pattern");
        CallShape shape = dissect_call(target->second.source);
        if (!shape.ok)
            throw LoadError("\\" + entry.macro_name +
                            " has a backward pattern, but its forward pattern is not a "
                            "plain function call: " +
                            target->second.source);

        BackwardRule rule;
        rule.entry = &entry;
        rule.function_name = shape.name;
        rule.arity = static_cast<int>(shape.args.size());
        bool all_slots = true;
        for (const std::string& raw : shape.args) {
            int slot = -1;
            if (plain_slot(trimmed(raw), slot))
                rule.slot_permutation.push_back(slot);
            else
                all_slots = false;
        }
        if (!all_slots) rule.slot_permutation.clear();

        if (entry.backward_pattern->max_slot() + 1 > rule.arity)
            throw LoadError("backward pattern of \\" + entry.macro_name +
                            " references slot $" +
                            std::to_string(entry.backward_pattern->max_slot()) +
                            " but " + rule.function_name + " only takes " +
                            std::to_string(rule.arity) + " argument(s)");

        auto key = std::make_pair(rule.function_name, rule.arity);
        if (index.by_key_.count(key))
            throw LoadError("backward index conflict: " + rule.function_name + "/" +
                            std::to_string(rule.arity) + " maps to both \\" +
                            index.rules_[index.by_key_[key]].entry->macro_name +
                            " and \\" + entry.macro_name);
        index.rules_.push_back(std::move(rule));
        index.by_key_[key] = index.rules_.size() - 1;
    }
    return index;
}

const BackwardRule* BackwardIndex::find(const std::string& function_name, int arity) const {
    auto it = by_key_.find({function_name, arity});
    return it == by_key_.end() ? nullptr : &rules_[it->second];
}

namespace {

class BackTranslator {
public:
    BackTranslator(const Lexicon& lexicon) : lex_(lexicon), index_(BackwardIndex::build(lexicon)) {}

    std::string translate(const CasNode& n) {
        switch (n.kind) {
        case CasKind::IntPos:
        case CasKind::IntNeg:
            return std::to_string(n.int_value);
        case CasKind::Float:
        case CasKind::MyFloat:
            return float_decimal(n.mantissa, n.exponent10);
        case CasKind::Rational:
            return rational_text(n);
        case CasKind::Name:
            return name_text(n.name);
        case CasKind::Sum:
            return sum_text(n);
        case CasKind::Prod:
            return prod_text(n);
        case CasKind::Power:
            return power_text(n);
        case CasKind::Divide:
            return "\\frac{" + translate(*n.children[0]) + "}{" +
                   translate(*n.children[1]) + "}";
        case CasKind::Complex:
            return complex_text(n);
        case CasKind::Function:
            return function_text(n);
        case CasKind::ExpSeq:
            throw TranslationError("a bare expression sequence has no LaTeX form");
        }
        throw TranslationError("untranslatable CAS node");
    }

private:
    const Lexicon& lex_;
    BackwardIndex index_;

    static bool negative_literal(const CasNode& n) {
        switch (n.kind) {
        case CasKind::IntNeg: return true;
        case CasKind::Rational: return n.numer < 0;
        case CasKind::Float:
        case CasKind::MyFloat: return n.mantissa < 0;
        default: return false;
        }
    }

    std::string rational_text(const CasNode& n) {
        long long num = n.numer;
        std::string sign = num < 0 ? "-" : "";
        if (num < 0) num = -num;
        return sign + "\\frac{" + std::to_string(num) + "}{" + std::to_string(n.denom) + "}";
    }

    std::string name_text(const std::string& name) {
        if (const SymbolEntry* sym = lex_.reverse_symbol(name)) return "\\" + sym->latex;
        return name;
    }

    std::string paren(const std::string& inner) {
        return "\\left(" + inner + "\\right)";
    }

    std::string sum_text(const CasNode& n) {
        std::string out;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const CasNode& term = *n.children[i];
            std::string t = translate(term);
            if (term.kind == CasKind::Sum || (!t.empty() && t.front() == '-')) t = paren(t);
            if (i == 0)
                out += (n.sum_factors[i] < 0 ? "-" : "") + t;
            else
                out += (n.sum_factors[i] < 0 ? "-" : "+") + t;
        }
        return out;
    }

    std::string prod_text(const CasNode& n) {
        std::string out;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            const CasNode& f = *n.children[i];
            std::string t = translate(f);
            bool needs_parens = f.kind == CasKind::Sum ||
                                (f.kind == CasKind::Complex && !is_plain_imaginary(f)) ||
                                (i > 0 && !t.empty() && t.front() == '-');
            if (needs_parens) t = paren(t);
            if (i > 0) {
                out += "\\idot";
                // A space only when needed: "\idot n", but "\idot\cos".
                if (!t.empty() && std::isalnum(static_cast<unsigned char>(t.front())))
                    out += " ";
            }
            out += t;
        }
        return out;
    }

    static bool is_plain_imaginary(const CasNode& n) {
        const CasNode& re = *n.children[0];
        const CasNode& im = *n.children[1];
        return re.kind == CasKind::IntPos && re.int_value == 0 &&
               im.kind == CasKind::IntPos && im.int_value == 1;
    }

    std::string power_text(const CasNode& n) {
        const CasNode& base = *n.children[0];
        const CasNode& exp = *n.children[1];
        if (exp.kind == CasKind::Rational && exp.numer == 1 && exp.denom == 2)
            return "\\sqrt{" + translate(base) + "}";
        if (exp.kind == CasKind::IntNeg && exp.int_value == -1)
            return "\\frac{1}{" + translate(base) + "}";
        std::string base_t = translate(base);
        switch (base.kind) {
        case CasKind::Sum:
        case CasKind::Prod:
        case CasKind::Divide:
        case CasKind::Power:
        case CasKind::Complex:
        case CasKind::Rational:
            base_t = paren(base_t);
            break;
        default:
            if (negative_literal(base)) base_t = paren(base_t);
            break;
        }
        return base_t + "^{" + translate(exp) + "}";
    }

    std::string complex_text(const CasNode& n) {
        const CasNode& re = *n.children[0];
        const CasNode& im = *n.children[1];
        bool re_zero = re.kind == CasKind::IntPos && re.int_value == 0;
        auto unit = [](const CasNode& v, long long x) {
            return (v.kind == CasKind::IntPos || v.kind == CasKind::IntNeg) &&
                   v.int_value == x;
        };
        if (re_zero) {
            if (unit(im, 1)) return "\\iunit";
            if (unit(im, -1)) return "-\\iunit";
            return translate(im) + "\\idot\\iunit";
        }
        std::string out = translate(re);
        if (unit(im, 1)) return out + "+\\iunit";
        if (unit(im, -1)) return out + "-\\iunit";
        if (negative_literal(im)) {
            CasPtr abs_im = negate(clone(im));
            return out + "-" + translate(*abs_im) + "\\idot\\iunit";
        }
        return out + "+" + translate(im) + "\\idot\\iunit";
    }

    std::string function_text(const CasNode& n) {
        const std::vector<CasPtr>& args = n.children[0]->children;
        if (n.name == "factorial" || n.name == "doublefactorial") {
            if (args.size() != 1)
                throw TranslationError(n.name + " takes exactly one argument");
            std::string t = translate(*args[0]);
            bool atom = args[0]->kind == CasKind::IntPos || args[0]->kind == CasKind::Name;
            if (!atom) t = "(" + t + ")";
            return t + (n.name == "factorial" ? "!" : "!!");
        }
        if (n.name == "LIST")
            throw TranslationError("a CAS list has no semantic LaTeX form");

        const BackwardRule* rule = index_.find(n.name, static_cast<int>(args.size()));
        if (!rule)
            throw TranslationError("no reverse translation for the CAS function '" + n.name +
                                   "' with " + std::to_string(args.size()) + " argument(s)");
        std::vector<std::string> filled;
        filled.reserve(args.size());
        for (const CasPtr& arg : args) filled.push_back(translate(*arg));
        return rule->entry->backward_pattern->fill(filled);
    }
};

} // namespace

std::string translate_back(const CasNode& node, const Lexicon& lexicon) {
    return BackTranslator(lexicon).translate(node);
}

std::string translate_back(const std::string& maple_text, const Lexicon& lexicon) {
    CasParseOptions opts;
    opts.unevaluated = true;
    CasPtr tree = parse_cas(maple_text, opts);
    tree = cosmetic(std::move(tree));
    return translate_back(*tree, lexicon);
}

} // namespace texcas
