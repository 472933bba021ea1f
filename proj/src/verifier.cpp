#include "texcas/verifier.hpp"

#include "texcas/backward_translator.hpp"
#include "texcas/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace texcas {

namespace {

using nlohmann::json;

// =============================== round trips ================================

// (implementation below uses translate / translate_back directly)

// ============================ structural tier ===============================

// Canonicalization works with exact arithmetic and bounded rewriting; when a
// bound is hit the comparison falls back to "inconclusive". The bound and all
// integer overflows funnel through this private exception.
struct CanonAbort {};

struct Budget {
    long long ops = 0;
    long long limit = 200000;
    void tick(long long n = 1) {
        ops += n;
        if (ops > limit) throw CanonAbort{};
    }
};

long long checked_add(long long a, long long b) {
    __int128 s = static_cast<__int128>(a) + b;
    if (s > std::numeric_limits<long long>::max() || s < std::numeric_limits<long long>::min())
        throw CanonAbort{};
    return static_cast<long long>(s);
}

long long checked_mul(long long a, long long b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > std::numeric_limits<long long>::max() || p < std::numeric_limits<long long>::min())
        throw CanonAbort{};
    return static_cast<long long>(p);
}

// Exact Gaussian rational (re + im*i) / den with den > 0 and gcd reduced.
struct GR {
    long long re = 0;
    long long im = 0;
    long long den = 1;
};

GR gr_norm(GR g) {
    if (g.den == 0) throw CanonAbort{};
    if (g.den < 0) {
        g.den = -g.den;
        g.re = -g.re;
        g.im = -g.im;
    }
    long long d = std::gcd(std::gcd(std::llabs(g.re), std::llabs(g.im)), g.den);
    if (d > 1) {
        g.re /= d;
        g.im /= d;
        g.den /= d;
    }
    return g;
}

GR gr_add(const GR& a, const GR& b) {
    return gr_norm({checked_add(checked_mul(a.re, b.den), checked_mul(b.re, a.den)),
                    checked_add(checked_mul(a.im, b.den), checked_mul(b.im, a.den)),
                    checked_mul(a.den, b.den)});
}

GR gr_mul(const GR& a, const GR& b) {
    return gr_norm({checked_add(checked_mul(a.re, b.re), -checked_mul(a.im, b.im)),
                    checked_add(checked_mul(a.re, b.im), checked_mul(a.im, b.re)),
                    checked_mul(a.den, b.den)});
}

GR gr_inv(const GR& a) {
    long long nrm = checked_add(checked_mul(a.re, a.re), checked_mul(a.im, a.im));
    if (nrm == 0) throw CanonAbort{};
    return gr_norm({checked_mul(a.den, a.re), checked_mul(a.den, -a.im), nrm});
}

GR gr_pow(GR a, long long e) {
    if (std::llabs(e) > 1024) throw CanonAbort{};
    if (e < 0) {
        a = gr_inv(a);
        e = -e;
    }
    GR r{1, 0, 1};
    while (e > 0) {
        if (e & 1) r = gr_mul(r, a);
        e >>= 1;
        if (e > 0) a = gr_mul(a, a);
    }
    return r;
}

bool gr_is(const GR& g, long long re, long long im, long long den) {
    return g.re == re && g.im == im && g.den == den;
}

std::optional<GR> gr_from(const CasNode& n) {
    switch (n.kind) {
    case CasKind::IntPos:
    case CasKind::IntNeg:
        return GR{n.int_value, 0, 1};
    case CasKind::Rational:
        return gr_norm({n.numer, 0, n.denom});
    case CasKind::Float:
    case CasKind::MyFloat: {
        if (n.exponent10 > 15 || n.exponent10 < -15) return std::nullopt;
        GR g{n.mantissa, 0, 1};
        try {
            for (int i = 0; i < n.exponent10; ++i) g.re = checked_mul(g.re, 10);
            for (int i = 0; i < -n.exponent10; ++i) g.den = checked_mul(g.den, 10);
        } catch (const CanonAbort&) {
            return std::nullopt;
        }
        return gr_norm(g);
    }
    case CasKind::Complex: {
        auto re = gr_from(*n.children[0]);
        auto im = gr_from(*n.children[1]);
        if (!re || !im || re->im != 0 || im->im != 0) return std::nullopt;
        return gr_norm({checked_mul(re->re, im->den), checked_mul(im->re, re->den),
                        checked_mul(re->den, im->den)});
    }
    default:
        return std::nullopt;
    }
}

CasPtr gr_part(long long num, long long den) {
    long long d = std::gcd(std::llabs(num), den);
    if (d > 1) {
        num /= d;
        den /= d;
    }
    if (den == 1) return make_int(num);
    return make_rational(num, den);
}

CasPtr gr_to(const GR& g) {
    if (g.im == 0) return gr_part(g.re, g.den);
    auto c = std::make_unique<CasNode>(CasKind::Complex);
    c->children.push_back(gr_part(g.re, g.den));
    c->children.push_back(gr_part(g.im, g.den));
    return c;
}

// ---- small constructors ----------------------------------------------------

CasPtr fn_exp(CasPtr arg) {
    auto seq = std::make_unique<CasNode>(CasKind::ExpSeq);
    seq->children.push_back(std::move(arg));
    auto f = std::make_unique<CasNode>(CasKind::Function);
    f->name = "exp";
    f->children.push_back(std::move(seq));
    return f;
}

CasPtr imag_lit(long long numer, long long denom) {
    auto c = std::make_unique<CasNode>(CasKind::Complex);
    c->children.push_back(make_int(0));
    c->children.push_back(denom == 1 ? make_int(numer) : make_rational(numer, denom));
    return c;
}

CasPtr prod2(CasPtr a, CasPtr b) {
    auto p = std::make_unique<CasNode>(CasKind::Prod);
    p->children.push_back(std::move(a));
    p->children.push_back(std::move(b));
    return p;
}

CasPtr sum2(CasPtr a, int fa, CasPtr b, int fb) {
    auto s = std::make_unique<CasNode>(CasKind::Sum);
    s->children.push_back(std::move(a));
    s->children.push_back(std::move(b));
    s->sum_factors = {fa, fb};
    return s;
}

bool is_int_literal(const CasNode& n) {
    return n.kind == CasKind::IntPos || n.kind == CasKind::IntNeg;
}

bool is_int_value(const CasNode& n, long long v) {
    return is_int_literal(n) && n.int_value == v;
}

bool is_exp_call(const CasNode& n) {
    return n.kind == CasKind::Function && n.name == "exp" && n.children.size() == 1 &&
           n.children[0]->children.size() == 1;
}

// ---- exponential rewrite (tier-1 option) -----------------------------------

// sin, cos, sinh, cosh of one argument become their exponential sums; tan and
// tanh are left alone (their exponential forms are quotients).
CasPtr rewrite_exp(CasPtr node, Budget& budget) {
    budget.tick();
    for (auto& child : node->children) child = rewrite_exp(std::move(child), budget);
    if (node->kind != CasKind::Function || node->children.size() != 1 ||
        node->children[0]->children.size() != 1)
        return node;
    const std::string& f = node->name;
    if (f != "sin" && f != "cos" && f != "sinh" && f != "cosh") return node;
    CasPtr z = std::move(node->children[0]->children[0]);
    CasPtr z_copy = clone(*z); // named first: argument evaluation order is unspecified
    if (f == "sin") {
        return sum2(prod2(imag_lit(-1, 2), fn_exp(prod2(imag_lit(1, 1), std::move(z_copy)))), 1,
                    prod2(imag_lit(1, 2), fn_exp(prod2(imag_lit(-1, 1), std::move(z)))), 1);
    }
    if (f == "cos") {
        return sum2(prod2(make_rational(1, 2), fn_exp(prod2(imag_lit(1, 1), std::move(z_copy)))), 1,
                    prod2(make_rational(1, 2), fn_exp(prod2(imag_lit(-1, 1), std::move(z)))), 1);
    }
    if (f == "sinh") {
        return sum2(prod2(make_rational(1, 2), fn_exp(std::move(z_copy))), 1,
                    prod2(make_rational(1, 2), fn_exp(prod2(make_int(-1), std::move(z)))), -1);
    }
    // cosh
    return sum2(prod2(make_rational(1, 2), fn_exp(std::move(z_copy))), 1,
                prod2(make_rational(1, 2), fn_exp(prod2(make_int(-1), std::move(z)))), 1);
}

// ---- distribution (tier-1 option) -------------------------------------------

// Expands products over sums and small integer powers of sums, bottom-up.
// Terms of an already-distributed sum contain no sums themselves, so one pass
// suffices.
CasPtr distribute(CasPtr node, Budget& budget);

CasPtr distribute_prod(CasPtr node, Budget& budget) {
    bool has_sum = std::any_of(node->children.begin(), node->children.end(),
                               [](const CasPtr& c) { return c->kind == CasKind::Sum; });
    if (!has_sum) return node;

    long long combos = 1;
    for (const auto& c : node->children) {
        if (c->kind == CasKind::Sum) combos = checked_mul(combos, (long long)c->children.size());
        if (combos > 4096) throw CanonAbort{};
    }
    budget.tick(combos);

    auto out = std::make_unique<CasNode>(CasKind::Sum);
    // Odometer over the terms of each sum factor.
    std::vector<std::size_t> idx;
    std::vector<const CasNode*> sums;
    for (const auto& c : node->children)
        if (c->kind == CasKind::Sum) {
            sums.push_back(c.get());
            idx.push_back(0);
        }
    while (true) {
        auto term = std::make_unique<CasNode>(CasKind::Prod);
        int sign = 1;
        std::size_t si = 0;
        for (const auto& c : node->children) {
            if (c->kind == CasKind::Sum) {
                const CasNode* s = sums[si];
                term->children.push_back(clone(*s->children[idx[si]]));
                sign *= s->sum_factors[idx[si]];
                ++si;
            } else {
                term->children.push_back(clone(*c));
            }
        }
        out->children.push_back(std::move(term));
        out->sum_factors.push_back(sign);

        std::size_t k = 0;
        while (k < idx.size()) {
            if (++idx[k] < sums[k]->children.size()) break;
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    return out;
}

CasPtr distribute(CasPtr node, Budget& budget) {
    budget.tick();
    for (auto& child : node->children) child = distribute(std::move(child), budget);
    if (node->kind == CasKind::Prod) return distribute_prod(std::move(node), budget);
    if (node->kind == CasKind::Power && node->children[0]->kind == CasKind::Sum &&
        node->children[1]->kind == CasKind::IntPos) {
        long long e = node->children[1]->int_value;
        if (e >= 2 && e <= 8) {
            auto prod = std::make_unique<CasNode>(CasKind::Prod);
            for (long long i = 0; i < e; ++i)
                prod->children.push_back(clone(*node->children[0]));
            return distribute_prod(std::move(prod), budget);
        }
    }
    return node;
}

// ---- the canonicalizer -------------------------------------------------------

CasPtr canon(CasPtr node, Budget& budget);

std::string canon_key(const CasNode& n) { return render_cas(n); }

// Splits a canonical term into (coefficient, core-render-key, core). A pure
// constant yields an empty key and a null core.
struct TermParts {
    GR coeff{1, 0, 1};
    std::string key;
    CasPtr core;
};

TermParts split_term(CasPtr term) {
    TermParts parts;
    if (auto g = gr_from(*term)) {
        parts.coeff = *g;
        return parts;
    }
    if (term->kind == CasKind::Prod && !term->children.empty()) {
        if (auto g = gr_from(*term->children[0])) {
            parts.coeff = *g;
            if (term->children.size() == 2) {
                parts.core = std::move(term->children[1]);
            } else {
                auto rest = std::make_unique<CasNode>(CasKind::Prod);
                for (std::size_t i = 1; i < term->children.size(); ++i)
                    rest->children.push_back(std::move(term->children[i]));
                parts.core = std::move(rest);
            }
            parts.key = canon_key(*parts.core);
            return parts;
        }
    }
    parts.key = canon_key(*term);
    parts.core = std::move(term);
    return parts;
}

CasPtr rebuild_term(const GR& coeff, CasPtr core) {
    if (gr_is(coeff, 1, 0, 1)) return core;
    auto lit = gr_to(coeff);
    auto p = std::make_unique<CasNode>(CasKind::Prod);
    p->children.push_back(std::move(lit));
    if (core->kind == CasKind::Prod) {
        for (auto& f : core->children) p->children.push_back(std::move(f));
    } else {
        p->children.push_back(std::move(core));
    }
    return p;
}

CasPtr canon_sum(CasPtr node, Budget& budget) {
    // Flatten, split into (coefficient, core), merge like cores, fold constants.
    GR constant{0, 0, 1};
    std::map<std::string, std::pair<CasPtr, GR>> terms; // key -> (core, coeff)

    auto absorb = [&](auto&& self, CasPtr sum_node, int outer) -> void {
        for (std::size_t i = 0; i < sum_node->children.size(); ++i) {
            budget.tick();
            int f = outer * sum_node->sum_factors[i];
            CasPtr child = canon(std::move(sum_node->children[i]), budget);
            if (child->kind == CasKind::Sum) {
                self(self, std::move(child), f);
                continue;
            }
            TermParts parts = split_term(std::move(child));
            if (f < 0) parts.coeff = gr_mul(parts.coeff, GR{-1, 0, 1});
            if (!parts.core) {
                constant = gr_add(constant, parts.coeff);
                continue;
            }
            auto it = terms.find(parts.key);
            if (it == terms.end())
                terms.emplace(parts.key, std::make_pair(std::move(parts.core), parts.coeff));
            else
                it->second.second = gr_add(it->second.second, parts.coeff);
        }
    };
    absorb(absorb, std::move(node), 1);

    std::vector<CasPtr> rebuilt;
    if (!gr_is(constant, 0, 0, 1)) rebuilt.push_back(gr_to(constant));
    for (auto& [key, entry] : terms) {
        if (gr_is(entry.second, 0, 0, 1)) continue; // coefficient cancelled
        rebuilt.push_back(rebuild_term(entry.second, std::move(entry.first)));
    }
    if (rebuilt.empty()) return make_int(0);
    if (rebuilt.size() == 1) return std::move(rebuilt[0]);
    auto out = std::make_unique<CasNode>(CasKind::Sum);
    for (auto& t : rebuilt) {
        out->children.push_back(std::move(t));
        out->sum_factors.push_back(1);
    }
    return out;
}

CasPtr canon_prod(CasPtr node, Budget& budget) {
    GR constant{1, 0, 1};
    std::vector<CasPtr> exp_args; // arguments of exp() factors, to be merged
    // base-render-key -> (base, exponent terms)
    std::map<std::string, std::pair<CasPtr, std::vector<CasPtr>>> factors;

    auto absorb_factor = [&](auto&& self, CasPtr f) -> void {
        budget.tick();
        if (f->kind == CasKind::Prod) {
            for (auto& c : f->children) self(self, canon(std::move(c), budget));
            return;
        }
        if (auto g = gr_from(*f)) {
            constant = gr_mul(constant, *g);
            return;
        }
        if (is_exp_call(*f)) {
            exp_args.push_back(std::move(f->children[0]->children[0]));
            return;
        }
        CasPtr base;
        CasPtr exponent;
        if (f->kind == CasKind::Power) {
            base = std::move(f->children[0]);
            exponent = std::move(f->children[1]);
        } else {
            base = std::move(f);
            exponent = make_int(1);
        }
        std::string key = canon_key(*base);
        auto it = factors.find(key);
        if (it == factors.end()) {
            std::vector<CasPtr> exps;
            exps.push_back(std::move(exponent));
            factors.emplace(key, std::make_pair(std::move(base), std::move(exps)));
        } else {
            it->second.second.push_back(std::move(exponent));
        }
    };
    for (auto& c : node->children) absorb_factor(absorb_factor, canon(std::move(c), budget));

    if (gr_is(constant, 0, 0, 1)) return make_int(0);

    std::map<std::string, CasPtr> rebuilt; // render key -> factor, for ordering
    for (auto& [key, entry] : factors) {
        CasPtr total;
        if (entry.second.size() == 1) {
            total = std::move(entry.second[0]);
        } else {
            auto s = std::make_unique<CasNode>(CasKind::Sum);
            for (auto& e : entry.second) {
                s->children.push_back(std::move(e));
                s->sum_factors.push_back(1);
            }
            total = canon(std::move(s), budget);
        }
        if (is_int_value(*total, 0)) continue; // x^0 -> 1
        CasPtr factor;
        if (is_int_value(*total, 1)) {
            factor = std::move(entry.first);
        } else {
            factor = std::make_unique<CasNode>(CasKind::Power);
            factor->children.push_back(std::move(entry.first));
            factor->children.push_back(std::move(total));
        }
        rebuilt.emplace(canon_key(*factor), std::move(factor));
    }
    if (!exp_args.empty()) {
        CasPtr merged;
        if (exp_args.size() == 1) {
            merged = std::move(exp_args[0]);
        } else {
            auto s = std::make_unique<CasNode>(CasKind::Sum);
            for (auto& a : exp_args) {
                s->children.push_back(std::move(a));
                s->sum_factors.push_back(1);
            }
            merged = canon(std::move(s), budget);
        }
        if (!is_int_value(*merged, 0)) { // exp(0) is the neutral factor
            auto e = fn_exp(std::move(merged));
            rebuilt.emplace(canon_key(*e), std::move(e));
        }
    }

    std::vector<CasPtr> out_children;
    if (!gr_is(constant, 1, 0, 1)) out_children.push_back(gr_to(constant));
    for (auto& [key, f] : rebuilt) out_children.push_back(std::move(f));

    if (out_children.empty()) return gr_to(constant); // the 1 literal
    if (out_children.size() == 1) return std::move(out_children[0]);
    auto out = std::make_unique<CasNode>(CasKind::Prod);
    out->children = std::move(out_children);
    return out;
}

CasPtr canon_power(CasPtr node, Budget& budget) {
    CasPtr base = canon(std::move(node->children[0]), budget);
    CasPtr exponent = canon(std::move(node->children[1]), budget);

    if (auto g = gr_from(*base); g && gr_is(*g, 1, 0, 1)) return make_int(1);

    if (is_int_literal(*exponent)) {
        long long e = exponent->int_value;
        if (e == 0) return make_int(1);
        if (e == 1) return base;
        if (auto g = gr_from(*base)) return gr_to(gr_pow(*g, e));
        // (a^m)^n -> a^(m n) for integer m, n
        if (base->kind == CasKind::Power && is_int_literal(*base->children[1])) {
            long long m = base->children[1]->int_value;
            auto inner = std::make_unique<CasNode>(CasKind::Power);
            inner->children.push_back(std::move(base->children[0]));
            inner->children.push_back(make_int(checked_mul(m, e)));
            return canon(std::move(inner), budget);
        }
        // exp(a)^n -> exp(n a) for integer n
        if (is_exp_call(*base)) {
            CasPtr arg = std::move(base->children[0]->children[0]);
            return fn_exp(canon(prod2(make_int(e), std::move(arg)), budget));
        }
        // (x y)^n -> x^n y^n for integer n
        if (base->kind == CasKind::Prod) {
            auto p = std::make_unique<CasNode>(CasKind::Prod);
            for (auto& f : base->children) {
                auto pw = std::make_unique<CasNode>(CasKind::Power);
                pw->children.push_back(std::move(f));
                pw->children.push_back(make_int(e));
                p->children.push_back(std::move(pw));
            }
            return canon(std::move(p), budget);
        }
    }
    auto out = std::make_unique<CasNode>(CasKind::Power);
    out->children.push_back(std::move(base));
    out->children.push_back(std::move(exponent));
    return out;
}

CasPtr canon(CasPtr node, Budget& budget) {
    budget.tick();
    switch (node->kind) {
    case CasKind::IntPos:
    case CasKind::IntNeg:
    case CasKind::Rational:
    case CasKind::Float:
    case CasKind::MyFloat:
    case CasKind::Complex: {
        if (auto g = gr_from(*node)) return gr_to(*g);
        if (node->kind == CasKind::Float || node->kind == CasKind::MyFloat) {
            // Non-foldable float: normalize the trailing zeros away.
            auto out = std::make_unique<CasNode>(CasKind::Float);
            out->mantissa = node->mantissa;
            out->exponent10 = node->exponent10;
            while (out->mantissa != 0 && out->mantissa % 10 == 0) {
                out->mantissa /= 10;
                ++out->exponent10;
            }
            return out;
        }
        return node; // Complex with an unfoldable part: keep as written
    }
    case CasKind::Name:
        return node;
    case CasKind::Sum:
        return canon_sum(std::move(node), budget);
    case CasKind::Prod:
        return canon_prod(std::move(node), budget);
    case CasKind::Power:
        return canon_power(std::move(node), budget);
    case CasKind::Divide: {
        auto den_pow = std::make_unique<CasNode>(CasKind::Power);
        den_pow->children.push_back(std::move(node->children[1]));
        den_pow->children.push_back(make_int(-1));
        return canon(prod2(std::move(node->children[0]), std::move(den_pow)), budget);
    }
    case CasKind::Function:
    case CasKind::ExpSeq:
        for (auto& c : node->children) c = canon(std::move(c), budget);
        if (is_exp_call(*node) && is_int_value(*node->children[0]->children[0], 0))
            return make_int(1); // exp(0) -> 1
        return node;
    }
    return node;
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

json complex_json(const std::complex<double>& z) {
    return json::array({z.real(), z.imag()});
}

json point_json(const PointResult& p) {
    json values = json::object();
    for (const auto& [name, z] : p.point) values[name] = complex_json(z);
    json j{{"point", values},
           {"abs_diff", p.abs_diff},
           {"rel_scale", p.rel_scale},
           {"passed", p.passed}};
    if (!p.error.empty()) j["error"] = p.error;
    return j;
}

json verdict_json(const VerdictReport& r) {
    json j{{"id", r.id},
           {"translated", r.translated},
           {"structural", r.structural},
           {"numeric", r.numeric},
           {"ok", r.ok()}};
    if (!r.lhs_maple.empty()) j["lhs_maple"] = r.lhs_maple;
    if (!r.rhs_maple.empty()) j["rhs_maple"] = r.rhs_maple;
    if (!r.points.empty()) {
        json pts = json::array();
        for (const auto& p : r.points) pts.push_back(point_json(p));
        j["points"] = pts;
    }
    if (!r.cause_hint.empty()) j["cause_hint"] = r.cause_hint;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

} // namespace

// =============================== round trips ================================

RoundTripReport round_trip(const std::string& input, StartSystem start, int max_cycles,
                           const Lexicon& lexicon) {
    if (max_cycles < 1) throw ConfigError("round trips need at least one cycle");
    RoundTripReport report;
    report.steps.push_back(input);
    bool forward_next = (start == StartSystem::Latex);
    for (int cycle = 0; cycle < max_cycles && !report.fixed_point_found; ++cycle) {
        report.cycles_used = cycle + 1;
        for (int half = 0; half < 2; ++half) {
            const std::string& current = report.steps.back();
            std::string next = forward_next
                                   ? translate(current, Target::Maple, lexicon).output
                                   : translate_back(current, lexicon);
            forward_next = !forward_next;
            report.steps.push_back(std::move(next));
            std::size_t k = report.steps.size() - 1;
            if (k >= 2 && report.steps[k] == report.steps[k - 2]) {
                report.fixed_point_found = true;
                report.fixed_point_step = k - 2;
                break;
            }
        }
    }
    return report;
}

// ================================ corpus ====================================

namespace {

RelationCase case_from_json(const json& j, const std::string& where) {
    try {
        RelationCase rc;
        rc.id = j.at("id").get<std::string>();
        rc.lhs = j.at("lhs").get<std::string>();
        rc.rhs = j.at("rhs").get<std::string>();
        if (j.contains("vars")) {
            for (const auto& v : j["vars"]) {
                VarDomain d;
                d.name = v.at("name").get<std::string>();
                if (v.contains("re")) {
                    d.re_min = v["re"].at(0).get<double>();
                    d.re_max = v["re"].at(1).get<double>();
                }
                if (v.contains("im")) {
                    d.im_min = v["im"].at(0).get<double>();
                    d.im_max = v["im"].at(1).get<double>();
                }
                rc.domain.vars.push_back(std::move(d));
            }
        }
        if (j.contains("exclude"))
            for (const auto& e : j["exclude"])
                rc.domain.exclusions.push_back(e.get<std::string>());
        if (j.contains("ref")) rc.ref = j["ref"].get<std::string>();
        if (j.contains("exp_rewrite")) rc.exp_rewrite = j["exp_rewrite"].get<bool>();
        return rc;
    } catch (const json::exception& e) {
        throw LoadError(where + " is malformed: " + e.what());
    }
}

} // namespace

// Accepts one JSON object, a JSON array of objects, or JSONL (one object per
// line, the corpus file's native format).
std::vector<RelationCase> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open corpus file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();

    std::vector<RelationCase> cases;
    auto add = [&](RelationCase rc) {
        for (const auto& seen : cases)
            if (seen.id == rc.id) throw LoadError("duplicate corpus id: " + rc.id);
        cases.push_back(std::move(rc));
    };

    json whole = json::parse(content, nullptr, /*allow_exceptions=*/false);
    if (whole.is_object()) {
        add(case_from_json(whole, path));
        return cases;
    }
    if (whole.is_array()) {
        for (const auto& j : whole) add(case_from_json(j, path));
        return cases;
    }

    std::istringstream lines(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        const std::string where = path + " line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw LoadError(where + " is not valid JSON: " + e.what());
        }
        add(case_from_json(j, where));
    }
    return cases;
}

// ============================ structural tier ===============================

CasPtr canonicalize(const CasNode& tree, bool exp_rewrite) {
    Budget budget;
    try {
        CasPtr t = clone(tree);
        if (exp_rewrite) {
            t = rewrite_exp(std::move(t), budget);
            t = distribute(std::move(t), budget);
        }
        return canon(std::move(t), budget);
    } catch (const CanonAbort&) {
        throw TexcasError("canonicalization budget exceeded");
    }
}

StructuralVerdict structural_compare(const CasNode& lhs, const CasNode& rhs,
                                     bool exp_rewrite) {
    try {
        CasPtr a = canonicalize(lhs, false);
        CasPtr b = canonicalize(rhs, false);
        if (structural_equal(*a, *b)) return StructuralVerdict::Equal;
        if (exp_rewrite) {
            a = canonicalize(lhs, true);
            b = canonicalize(rhs, true);
            if (structural_equal(*a, *b)) return StructuralVerdict::Equal;
        }
    } catch (const TexcasError&) {
        // fall through: the tiers below decide
    }
    return StructuralVerdict::Inconclusive;
}

// ============================= numeric tier =================================

VerdictReport verify_case(const RelationCase& relation, const Lexicon& lexicon,
                          const VerifyConfig& config) {
    VerdictReport report;
    report.id = relation.id;
    report.structural = "inconclusive";
    report.numeric = "skipped";

    CasPtr lhs_tree;
    CasPtr rhs_tree;
    try {
        report.lhs_maple = translate(relation.lhs, Target::Maple, lexicon).output;
        report.rhs_maple = translate(relation.rhs, Target::Maple, lexicon).output;
        lhs_tree = parse_cas(report.lhs_maple);
        rhs_tree = parse_cas(report.rhs_maple);
        report.translated = true;
    } catch (const TexcasError& e) {
        report.error = e.what();
        return report;
    }

    if (structural_compare(*lhs_tree, *rhs_tree, relation.exp_rewrite) ==
        StructuralVerdict::Equal)
        report.structural = "equal";

    auto unknown = unregistered_functions(*lhs_tree);
    for (auto& f : unregistered_functions(*rhs_tree))
        if (std::find(unknown.begin(), unknown.end(), f) == unknown.end())
            unknown.push_back(std::move(f));
    if (!unknown.empty()) {
        if (report.structural != "equal")
            report.cause_hint =
                "no numeric implementation for: " + join_names(unknown);
        return report;
    }

    Env base_env;
    base_env.convention = config.convention;
    std::vector<SamplePoint> points;
    try {
        points = sample_points(relation.domain, config.points, config.seed, base_env);
    } catch (const TexcasError& e) {
        report.error = std::string("sampling failed: ") + e.what();
        return report;
    }

    int failures = 0;
    for (const auto& sample : points) {
        PointResult pr;
        pr.point = sample.values;
        Env env = base_env;
        env.bindings = sample.values;
        try {
            std::complex<double> lhs_value = eval(*lhs_tree, env);
            std::complex<double> rhs_value = eval(*rhs_tree, env);
            pr.abs_diff = std::abs(lhs_value - rhs_value);
            pr.rel_scale = std::max(1.0, std::abs(lhs_value));
            pr.passed = pr.abs_diff < config.tol * pr.rel_scale;
        } catch (const EvalError& e) {
            pr.passed = false;
            pr.error = e.what();
        }
        failures += pr.passed ? 0 : 1;
        report.points.push_back(std::move(pr));
    }
    report.numeric = failures == 0 ? "pass" : "fail";
    if (failures > 0) {
        if (failures == static_cast<int>(points.size()))
            report.cause_hint = "every sample point disagrees; the translation is likely "
                                "inappropriately defined for this relation";
        else if (!relation.domain.exclusions.empty())
            report.cause_hint = "some sample points disagree; the sampler may have hit "
                                "invalid combinations of values near an excluded region";
        else
            report.cause_hint = "some sample points disagree; manual review is advised";
    }
    return report;
}

std::string verdict_to_json(const VerdictReport& report) {
    return verdict_json(report).dump(2);
}

// ================================ summary ====================================

double CorpusSummary::translated_pct() const {
    return cases == 0 ? 100.0 : 100.0 * translated / cases;
}

double CorpusSummary::structural_pct() const {
    return translated == 0 ? 100.0 : 100.0 * structural_equal / translated;
}

double CorpusSummary::numeric_pct() const {
    int remainder = translated - structural_equal;
    return remainder == 0 ? 100.0 : 100.0 * numeric_pass / remainder;
}

CorpusSummary corpus_run(const std::vector<RelationCase>& cases, const Lexicon& lexicon,
                         const VerifyConfig& config) {
    CorpusSummary summary;
    summary.cases = static_cast<int>(cases.size());
    for (const auto& relation : cases) {
        VerdictReport report;
        try {
            report = verify_case(relation, lexicon, config);
        } catch (const std::exception& e) {
            report.id = relation.id;
            report.error = e.what();
        }
        summary.translated += report.translated ? 1 : 0;
        if (report.structural == "equal") {
            ++summary.structural_equal;
        } else {
            summary.numeric_pass += report.numeric == "pass" ? 1 : 0;
            summary.numeric_skipped += report.numeric == "skipped" ? 1 : 0;
        }
        summary.failed += report.ok() ? 0 : 1;
        summary.reports.push_back(std::move(report));
    }
    return summary;
}

std::string summary_to_json(const CorpusSummary& summary, bool include_reports) {
    json j{{"cases", summary.cases},
           {"translated", summary.translated},
           {"translated_pct", summary.translated_pct()},
           {"structural_equal", summary.structural_equal},
           {"structural_pct", summary.structural_pct()},
           {"numeric_pass", summary.numeric_pass},
           {"numeric_skipped", summary.numeric_skipped},
           {"numeric_pct", summary.numeric_pct()},
           {"failed", summary.failed}};
    if (include_reports) {
        json reports = json::array();
        for (const auto& r : summary.reports) reports.push_back(verdict_json(r));
        j["reports"] = reports;
    }
    return j.dump(2);
}

} // namespace texcas
