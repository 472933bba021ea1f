#include "texcas/cas_parser.hpp"

#include "texcas/errors.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace texcas {

namespace {

bool is_int_literal(const CasNode& n) {
    return n.kind == CasKind::IntPos || n.kind == CasKind::IntNeg;
}

bool is_numeric_literal(const CasNode& n) {
    return is_int_literal(n) || n.kind == CasKind::Rational || n.kind == CasKind::Float;
}

bool is_zero_int(const CasNode& n) {
    return n.kind == CasKind::IntPos && n.int_value == 0;
}

bool is_int_value(const CasNode& n, long long v) {
    return is_int_literal(n) && n.int_value == v;
}

// Pure imaginary with unit coefficient: the parse of a bare "I".
bool is_unit_imaginary(const CasNode& n) {
    return n.kind == CasKind::Complex && is_zero_int(*n.children[0]) &&
           is_int_value(*n.children[1], 1);
}

bool is_pure_imaginary(const CasNode& n) {
    return n.kind == CasKind::Complex && is_zero_int(*n.children[0]);
}

CasPtr make_node(CasKind kind) { return std::make_unique<CasNode>(kind); }

} // namespace

CasPtr make_int(long long value) {
    auto n = make_node(value < 0 ? CasKind::IntNeg : CasKind::IntPos);
    n->int_value = value;
    return n;
}

CasPtr make_name(std::string name) {
    auto n = make_node(CasKind::Name);
    n->name = std::move(name);
    return n;
}

CasPtr make_rational(long long numer, long long denom) {
    if (denom < 0) {
        numer = -numer;
        denom = -denom;
    }
    auto n = make_node(CasKind::Rational);
    n->numer = numer;
    n->denom = denom;
    return n;
}

CasPtr clone(const CasNode& node) {
    auto out = make_node(node.kind);
    out->int_value = node.int_value;
    out->mantissa = node.mantissa;
    out->exponent10 = node.exponent10;
    out->numer = node.numer;
    out->denom = node.denom;
    out->name = node.name;
    out->sum_factors = node.sum_factors;
    out->children.reserve(node.children.size());
    for (const auto& c : node.children) out->children.push_back(clone(*c));
    return out;
}

bool structural_equal(const CasNode& a, const CasNode& b) {
    if (a.kind != b.kind) return false;
    if (a.int_value != b.int_value || a.mantissa != b.mantissa ||
        a.exponent10 != b.exponent10 || a.numer != b.numer || a.denom != b.denom ||
        a.name != b.name || a.sum_factors != b.sum_factors)
        return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structural_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

CasPtr negate(CasPtr node) {
    switch (node->kind) {
    case CasKind::IntPos:
        if (node->int_value == 0) return node;
        node->kind = CasKind::IntNeg;
        node->int_value = -node->int_value;
        return node;
    case CasKind::IntNeg:
        node->kind = CasKind::IntPos;
        node->int_value = -node->int_value;
        return node;
    case CasKind::Rational:
        node->numer = -node->numer;
        return node;
    case CasKind::Float:
    case CasKind::MyFloat:
        node->mantissa = -node->mantissa;
        return node;
    case CasKind::Complex:
        node->children[0] = negate(std::move(node->children[0]));
        node->children[1] = negate(std::move(node->children[1]));
        return node;
    case CasKind::Sum:
        for (int& f : node->sum_factors) f = -f;
        return node;
    case CasKind::Prod:
        for (auto& c : node->children) {
            if (is_numeric_literal(*c)) {
                c = negate(std::move(c));
                return node;
            }
        }
        node->children.push_back(make_int(-1));
        return node;
    default: {
        auto prod = make_node(CasKind::Prod);
        prod->children.push_back(std::move(node));
        prod->children.push_back(make_int(-1));
        return prod;
    }
    }
}

// --- parsing ----------------------------------------------------------------

namespace {

class CasParser {
public:
    CasParser(const std::string& source, const CasParseOptions& opts)
        : src_(source), opts_(opts) {}

    CasPtr run() {
        skip_ws();
        bool quoted = false;
        if (!done() && peek() == '\'') {
            if (!opts_.unevaluated)
                throw ParseError("unevaluation quote in CAS input", pos_);
            quoted = true;
            ++pos_;
        }
        CasPtr expr = parse_sum();
        skip_ws();
        if (quoted) {
            if (done() || peek() != '\'')
                throw ParseError("missing closing unevaluation quote", pos_);
            ++pos_;
            skip_ws();
        }
        if (!done())
            throw ParseError(std::string("unexpected character '") + peek() +
                                 "' in CAS input",
                             pos_);
        return expr;
    }

private:
    const std::string& src_;
    CasParseOptions opts_;
    std::size_t pos_ = 0;

    bool done() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (done() || src_[pos_] != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c, const char* what) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "' " + what, pos_);
    }

    long long to_ll(const std::string& digits, std::size_t at) {
        try {
            return std::stoll(digits);
        } catch (const std::out_of_range&) {
            throw ParseError("integer literal too large", at);
        }
    }

    CasPtr parse_sum() {
        skip_ws();
        int sign = 1;
        while (!done() && (peek() == '+' || peek() == '-')) {
            if (peek() == '-') sign = -sign;
            ++pos_;
            skip_ws();
        }
        std::vector<CasPtr> terms;
        std::vector<int> factors;
        terms.push_back(parse_product());
        factors.push_back(sign);
        for (;;) {
            skip_ws();
            if (done() || (peek() != '+' && peek() != '-')) break;
            int f = 1;
            while (!done() && (peek() == '+' || peek() == '-')) {
                if (peek() == '-') f = -f;
                ++pos_;
                skip_ws();
            }
            terms.push_back(parse_product());
            factors.push_back(f);
        }
        if (terms.size() == 1)
            return factors[0] < 0 ? negate(std::move(terms[0])) : std::move(terms[0]);

        // Literal +/- pure-imaginary pairs collapse to a Complex literal.
        if (terms.size() == 2) {
            int re = -1, im = -1;
            for (int k = 0; k < 2; ++k) {
                if (is_pure_imaginary(*terms[k])) im = k;
                else if (is_numeric_literal(*terms[k])) re = k;
            }
            if (re >= 0 && im >= 0) {
                CasPtr re_node = std::move(terms[re]);
                if (factors[re] < 0) re_node = negate(std::move(re_node));
                CasPtr im_node = std::move(terms[im]->children[1]);
                if (factors[im] < 0) im_node = negate(std::move(im_node));
                auto cx = make_node(CasKind::Complex);
                cx->children.push_back(std::move(re_node));
                cx->children.push_back(std::move(im_node));
                return cx;
            }
        }
        auto sum = make_node(CasKind::Sum);
        sum->children = std::move(terms);
        sum->sum_factors = std::move(factors);
        return sum;
    }

    void push_factor(std::vector<CasPtr>& factors, CasPtr f) {
        if (f->kind == CasKind::Prod) { // keep products flat
            for (auto& c : f->children) factors.push_back(std::move(c));
        } else {
            factors.push_back(std::move(f));
        }
    }

    CasPtr parse_product() {
        std::vector<CasPtr> factors;
        push_factor(factors, parse_unary());
        for (;;) {
            skip_ws();
            if (done()) break;
            char op = peek();
            if (op != '*' && op != '/') break;
            ++pos_;
            CasPtr rhs = parse_unary();
            if (op == '/') {
                // Integer over positive integer is a (never reduced) rational.
                if (!factors.empty() && is_int_literal(*factors.back()) &&
                    rhs->kind == CasKind::IntPos && rhs->int_value > 0) {
                    auto rat = make_rational(factors.back()->int_value, rhs->int_value);
                    factors.back() = std::move(rat);
                } else {
                    auto pw = make_node(CasKind::Power);
                    pw->children.push_back(std::move(rhs));
                    pw->children.push_back(make_int(-1));
                    factors.push_back(std::move(pw));
                }
            } else {
                push_factor(factors, std::move(rhs));
            }
        }
        if (factors.size() == 1) return std::move(factors[0]);
        if (factors.size() == 2) {
            // A numeric literal times bare I collapses to a Complex literal.
            int lit = -1, unit = -1;
            for (int k = 0; k < 2; ++k) {
                if (is_unit_imaginary(*factors[k])) unit = k;
                else if (is_numeric_literal(*factors[k])) lit = k;
            }
            if (lit >= 0 && unit >= 0) {
                auto cx = make_node(CasKind::Complex);
                cx->children.push_back(make_int(0));
                cx->children.push_back(std::move(factors[lit]));
                return cx;
            }
        }
        auto prod = make_node(CasKind::Prod);
        prod->children = std::move(factors);
        return prod;
    }

    CasPtr parse_unary() {
        skip_ws();
        if (!done() && peek() == '-') {
            ++pos_;
            return negate(parse_unary());
        }
        if (!done() && peek() == '+') {
            ++pos_;
            return parse_unary();
        }
        return parse_power();
    }

    CasPtr parse_power() {
        CasPtr base = parse_postfix();
        skip_ws();
        if (!done() && peek() == '^') {
            ++pos_;
            CasPtr exp = parse_unary();
            auto pw = make_node(CasKind::Power);
            pw->children.push_back(std::move(base));
            pw->children.push_back(std::move(exp));
            return pw;
        }
        return base;
    }

    CasPtr parse_postfix() {
        CasPtr value = parse_atom();
        for (;;) {
            skip_ws();
            if (done() || peek() != '!') break;
            ++pos_;
            bool dbl = !done() && peek() == '!';
            if (dbl) ++pos_;
            auto fn = make_node(CasKind::Function);
            fn->name = dbl ? "doublefactorial" : "factorial";
            auto args = make_node(CasKind::ExpSeq);
            args->children.push_back(std::move(value));
            fn->children.push_back(std::move(args));
            value = std::move(fn);
        }
        return value;
    }

    CasPtr parse_atom() {
        skip_ws();
        if (done()) throw ParseError("unexpected end of CAS input", pos_);
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name_or_call();
        if (c == '(') {
            ++pos_;
            CasPtr inner = parse_sum();
            expect(')', "to close '('");
            return inner;
        }
        if (c == '[') {
            ++pos_;
            auto list = make_node(CasKind::Function);
            list->name = "LIST";
            list->children.push_back(parse_expseq(']'));
            expect(']', "to close '['");
            return list;
        }
        throw ParseError(std::string("unexpected character '") + c + "' in CAS input", pos_);
    }

    CasPtr parse_number() {
        std::size_t start = pos_;
        std::string digits;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
            digits += src_[pos_++];
        bool is_float = false;
        int exp10 = 0;
        if (!done() && peek() == '.') {
            ++pos_;
            is_float = true;
            std::string frac;
            while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
                frac += src_[pos_++];
            digits += frac;
            exp10 -= static_cast<int>(frac.size());
        }
        if (!done() && (peek() == 'e' || peek() == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            int sign = 1;
            if (!done() && (peek() == '+' || peek() == '-')) {
                if (peek() == '-') sign = -1;
                ++pos_;
            }
            std::string e;
            while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
                e += src_[pos_++];
            if (e.empty()) {
                pos_ = save; // the 'e' was a name, not an exponent marker
            } else {
                is_float = true;
                exp10 += sign * static_cast<int>(to_ll(e, save));
            }
        }
        if (!is_float) {
            auto n = make_node(CasKind::IntPos);
            n->int_value = to_ll(digits, start);
            return n;
        }
        auto f = make_node(CasKind::Float);
        f->mantissa = to_ll(digits, start);
        f->exponent10 = exp10;
        return f;
    }

    CasPtr parse_name_or_call() {
        std::string name;
        while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            name += src_[pos_++];
        skip_ws();
        if (!done() && peek() == '(') {
            ++pos_;
            CasPtr args = parse_expseq(')');
            expect(')', "to close the argument list");
            if (name == "sqrt" && args->children.size() == 1) {
                auto pw = make_node(CasKind::Power);
                pw->children.push_back(std::move(args->children[0]));
                pw->children.push_back(make_rational(1, 2));
                return pw;
            }
            auto fn = make_node(CasKind::Function);
            fn->name = std::move(name);
            fn->children.push_back(std::move(args));
            return fn;
        }
        if (name == "I") {
            auto cx = make_node(CasKind::Complex);
            cx->children.push_back(make_int(0));
            cx->children.push_back(make_int(1));
            return cx;
        }
        return make_name(std::move(name));
    }

    CasPtr parse_expseq(char closer) {
        auto seq = make_node(CasKind::ExpSeq);
        skip_ws();
        if (!done() && peek() == closer) return seq;
        seq->children.push_back(parse_sum());
        while (accept(',')) seq->children.push_back(parse_sum());
        return seq;
    }
};

} // namespace

CasPtr parse_cas(const std::string& source, const CasParseOptions& opts) {
    return CasParser(source, opts).run();
}

// --- cosmetic display pass ----------------------------------------------------

namespace {

bool float_fits_decimal(const CasNode& n) {
    return n.exponent10 >= -6 && n.exponent10 <= 6;
}

CasPtr cosmetic_prod(CasPtr node) {
    bool negative = false;
    std::vector<CasPtr> numerators;
    std::vector<CasPtr> denominators;
    for (auto& child : node->children) {
        CasPtr c = std::move(child);
        if (is_int_value(*c, -1)) {
            negative = !negative;
            continue;
        }
        if (is_int_value(*c, 1)) continue;
        if (c->kind == CasKind::Power && is_int_value(*c->children[1], -1)) {
            CasNode& base = *c->children[0];
            if (base.kind == CasKind::IntPos && base.int_value > 0) {
                numerators.push_back(make_rational(1, base.int_value));
            } else {
                denominators.push_back(std::move(c->children[0]));
            }
            continue;
        }
        // Children were made cosmetic first, so reciprocal factors usually
        // arrive as Divide nodes already.
        if (c->kind == CasKind::Divide) {
            if (!is_int_value(*c->children[0], 1))
                numerators.push_back(std::move(c->children[0]));
            denominators.push_back(std::move(c->children[1]));
            continue;
        }
        numerators.push_back(std::move(c));
    }

    // Numeric factors read best in front: 1/2*cos(x), not cos(x)*1/2.
    std::stable_partition(numerators.begin(), numerators.end(),
                          [](const CasPtr& f) { return is_numeric_literal(*f); });

    auto wrap_group = [](std::vector<CasPtr> parts) -> CasPtr {
        if (parts.empty()) return make_int(1);
        if (parts.size() == 1) return std::move(parts[0]);
        auto prod = make_node(CasKind::Prod);
        prod->children = std::move(parts);
        return prod;
    };

    CasPtr result;
    if (!denominators.empty()) {
        auto divide = make_node(CasKind::Divide);
        divide->children.push_back(wrap_group(std::move(numerators)));
        divide->children.push_back(wrap_group(std::move(denominators)));
        result = std::move(divide);
    } else {
        result = wrap_group(std::move(numerators));
    }
    if (negative) {
        auto sum = make_node(CasKind::Sum);
        sum->children.push_back(std::move(result));
        sum->sum_factors.push_back(-1);
        return sum;
    }
    return result;
}

} // namespace

CasPtr cosmetic(CasPtr node) {
    for (auto& c : node->children) c = cosmetic(std::move(c));
    switch (node->kind) {
    case CasKind::Prod:
        return cosmetic_prod(std::move(node));
    case CasKind::Power:
        if (is_int_value(*node->children[1], -1)) {
            CasNode& base = *node->children[0];
            if (base.kind == CasKind::IntPos && base.int_value > 0)
                return make_rational(1, base.int_value);
            auto divide = make_node(CasKind::Divide);
            divide->children.push_back(make_int(1));
            divide->children.push_back(std::move(node->children[0]));
            return divide;
        }
        return node;
    case CasKind::Float:
        if (float_fits_decimal(*node)) node->kind = CasKind::MyFloat;
        return node;
    default:
        return node;
    }
}

// --- rendering -----------------------------------------------------------------

namespace {

bool is_negative_literal(const CasNode& n) {
    switch (n.kind) {
    case CasKind::IntNeg: return true;
    case CasKind::Rational: return n.numer < 0;
    case CasKind::Float:
    case CasKind::MyFloat: return n.mantissa < 0;
    default: return false;
    }
}

int precedence(const CasNode& n) {
    switch (n.kind) {
    case CasKind::Sum: return 1;
    case CasKind::Prod:
    case CasKind::Divide: return 2;
    case CasKind::Rational: return n.numer < 0 ? 1 : 2;
    case CasKind::Power: return 3;
    case CasKind::IntNeg: return 1;
    case CasKind::Float:
    case CasKind::MyFloat: return n.mantissa < 0 ? 1 : 10;
    case CasKind::Complex: {
        if (!is_zero_int(*n.children[0])) return 1;
        const CasNode& im = *n.children[1];
        if (is_int_value(im, 1)) return 10;
        // "k*I" must be parenthesized even inside a product: the parser only
        // reconstitutes the literal-times-I spelling as a standalone product.
        return 1;
    }
    default: return 10;
    }
}

std::string zeros(int n) { return std::string(static_cast<std::size_t>(n), '0'); }

} // namespace

std::string float_decimal(long long mantissa, int exp10) {
    std::string digits = std::to_string(mantissa < 0 ? -mantissa : mantissa);
    std::string out;
    if (exp10 >= 0) {
        out = digits + zeros(exp10) + ".";
    } else {
        int k = -exp10;
        if (k < static_cast<int>(digits.size()))
            out = digits.substr(0, digits.size() - k) + "." +
                  digits.substr(digits.size() - k);
        else
            out = "0." + zeros(k - static_cast<int>(digits.size())) + digits;
    }
    return (mantissa < 0 ? "-" : "") + out;
}

namespace {

std::string render(const CasNode& n, int min_prec);

std::string render_raw(const CasNode& n) {
    switch (n.kind) {
    case CasKind::IntPos:
    case CasKind::IntNeg:
        return std::to_string(n.int_value);
    case CasKind::Name:
        return n.name;
    case CasKind::Rational:
        return std::to_string(n.numer) + "/" + std::to_string(n.denom);
    case CasKind::Float:
    case CasKind::MyFloat:
        return float_decimal(n.mantissa, n.exponent10);
    case CasKind::Sum: {
        std::string out;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            std::string term = render(*n.children[i], 2);
            if (!term.empty() && term.front() == '-') term = "(" + term + ")";
            if (i == 0)
                out += (n.sum_factors[i] < 0 ? "-" : "") + term;
            else
                out += (n.sum_factors[i] < 0 ? "-" : "+") + term;
        }
        return out;
    }
    case CasKind::Prod: {
        std::string out;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i > 0) out += "*";
            out += render(*n.children[i], i == 0 ? 2 : 3);
        }
        return out;
    }
    case CasKind::Power:
        return render(*n.children[0], 4) + "^" + render(*n.children[1], 3);
    case CasKind::Function: {
        std::string args;
        for (std::size_t i = 0; i < n.children[0]->children.size(); ++i) {
            if (i > 0) args += ",";
            args += render(*n.children[0]->children[i], 1);
        }
        if (n.name == "LIST") return "[" + args + "]";
        return n.name + "(" + args + ")";
    }
    case CasKind::ExpSeq: {
        std::string out;
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i > 0) out += ",";
            out += render(*n.children[i], 1);
        }
        return out;
    }
    case CasKind::Complex: {
        const CasNode& re = *n.children[0];
        const CasNode& im = *n.children[1];
        if (is_zero_int(re)) {
            if (is_int_value(im, 1)) return "I";
            if (is_int_value(im, -1)) return "-I";
            return render(im, 2) + "*I";
        }
        std::string out = render(re, 2);
        if (is_int_value(im, 1)) return out + "+I";
        if (is_int_value(im, -1)) return out + "-I";
        if (is_negative_literal(im)) {
            CasPtr abs_im = negate(clone(im));
            return out + "-" + render(*abs_im, 2) + "*I";
        }
        return out + "+" + render(im, 2) + "*I";
    }
    case CasKind::Divide:
        return "(" + render(*n.children[0], 1) + ")/(" + render(*n.children[1], 1) + ")";
    }
    return "?";
}

std::string render(const CasNode& n, int min_prec) {
    std::string raw = render_raw(n);
    if (precedence(n) < min_prec) return "(" + raw + ")";
    return raw;
}

} // namespace

std::string render_cas(const CasNode& node) { return render(node, 0); }

} // namespace texcas
