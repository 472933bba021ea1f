#include "texcas/evaluator.hpp"

#include "texcas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <span>

namespace texcas {
namespace {

using Cx = std::complex<double>;

bool finite(const Cx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Requires a value within eps of a mathematical integer; returns it.
long long integer_of(const Cx& z, const char* what) {
    if (std::abs(z.imag()) > 1e-9)
        throw EvalError(std::string(what) + " must be an integer, got a complex value");
    double r = std::round(z.real());
    if (std::abs(z.real() - r) > 1e-9)
        throw EvalError(std::string(what) + " must be an integer, got " +
                        std::to_string(z.real()));
    return static_cast<long long>(r);
}

Cx factorial_value(const Cx& z) {
    long long n = integer_of(z, "the factorial argument");
    if (n < 0) throw EvalError("factorial of a negative integer");
    if (n > 170) throw EvalError("factorial argument too large");
    double acc = 1.0;
    for (long long k = 2; k <= n; ++k) acc *= static_cast<double>(k);
    return Cx(acc, 0.0);
}

Cx doublefactorial_value(const Cx& z) {
    long long n = integer_of(z, "the double factorial argument");
    if (n < -1) throw EvalError("double factorial of an integer below -1");
    if (n > 300) throw EvalError("double factorial argument too large");
    double acc = 1.0;
    for (long long k = n; k >= 2; k -= 2) acc *= static_cast<double>(k);
    return Cx(acc, 0.0);
}

// Three-term recurrence for the Jacobi polynomial P_n^(a,b)(x).
Cx jacobi_p(const Cx& nz, const Cx& a, const Cx& b, const Cx& x) {
    long long n = integer_of(nz, "the Jacobi polynomial degree");
    if (n < 0) throw EvalError("the Jacobi polynomial degree must be nonnegative");
    Cx p0 = 1.0;
    if (n == 0) return p0;
    Cx p1 = (a - b) / 2.0 + (a + b + 2.0) / 2.0 * x;
    if (n == 1) return p1;
    for (long long k = 2; k <= n; ++k) {
        Cx kk(static_cast<double>(k), 0.0);
        Cx c = 2.0 * kk + a + b;
        Cx denom = 2.0 * kk * (kk + a + b) * (c - 2.0);
        if (std::abs(denom) < 1e-12)
            throw EvalError("Jacobi recurrence breaks down for these parameters");
        Cx p2 = ((c - 1.0) * ((c * (c - 2.0)) * x + a * a - b * b) * p1 -
                 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * c * p0) /
                denom;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

Cx legendre_p(const Cx& nz, const Cx& x) {
    long long n = integer_of(nz, "the Legendre polynomial degree");
    if (n < 0) throw EvalError("the Legendre polynomial degree must be nonnegative");
    Cx p0 = 1.0;
    if (n == 0) return p0;
    Cx p1 = x;
    for (long long k = 1; k < n; ++k) {
        double kd = static_cast<double>(k);
        Cx p2 = ((2.0 * kd + 1.0) * x * p1 - kd * p0) / (kd + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Ferrers function of integer degree and order.
Cx legendre_p_assoc(const Cx& nz, const Cx& mz, const Cx& x) {
    long long n = integer_of(nz, "the Legendre degree");
    long long m = integer_of(mz, "the Legendre order");
    if (n < 0) throw EvalError("the Legendre degree must be nonnegative");
    if (std::llabs(m) > n) throw EvalError("the Legendre order must satisfy |m| <= degree");
    bool flip = m < 0;
    long long mm = std::llabs(m);
    // P_mm^mm(x) = (-1)^mm (2 mm - 1)!! (1 - x^2)^(mm/2)
    Cx pmm = 1.0;
    if (mm > 0) {
        double df = 1.0;
        for (long long k = 2 * mm - 1; k >= 3; k -= 2) df *= static_cast<double>(k);
        Cx base = std::pow(1.0 - x * x, Cx(static_cast<double>(mm) / 2.0, 0.0));
        pmm = ((mm % 2) ? -1.0 : 1.0) * df * base;
    }
    Cx result;
    if (n == mm) {
        result = pmm;
    } else {
        Cx pmm1 = (2.0 * static_cast<double>(mm) + 1.0) * x * pmm;
        for (long long k = mm + 2; k <= n; ++k) {
            double kd = static_cast<double>(k);
            double md = static_cast<double>(mm);
            Cx p = ((2.0 * kd - 1.0) * x * pmm1 - (kd + md - 1.0) * pmm) / (kd - md);
            pmm = pmm1;
            pmm1 = p;
        }
        result = pmm1;
    }
    if (flip) {
        // P_n^{-m} = (-1)^m (n-m)!/(n+m)! P_n^m
        double ratio = 1.0;
        for (long long k = n - mm + 1; k <= n + mm; ++k) ratio /= static_cast<double>(k);
        result *= ((mm % 2) ? -1.0 : 1.0) * ratio;
    }
    return result;
}

Cx arccot_value(const Cx& z, Convention convention) {
    if (convention == Convention::Maple)
        return std::numbers::pi / 2.0 - std::atan(z);
    if (z == Cx(0.0, 0.0)) return Cx(std::numbers::pi / 2.0, 0.0);
    return std::atan(1.0 / z);
}

using FnImpl = std::function<Cx(std::span<const Cx>, const Env&)>;

const std::map<std::pair<std::string, int>, FnImpl>& registry() {
    static const std::map<std::pair<std::string, int>, FnImpl> table = [] {
        std::map<std::pair<std::string, int>, FnImpl> t;
        auto unary = [&t](const char* name, Cx (*fn)(const Cx&)) {
            t[{name, 1}] = [fn](std::span<const Cx> a, const Env&) { return fn(a[0]); };
        };
        unary("sin", +[](const Cx& z) { return std::sin(z); });
        unary("cos", +[](const Cx& z) { return std::cos(z); });
        unary("tan", +[](const Cx& z) { return std::tan(z); });
        unary("sinh", +[](const Cx& z) { return std::sinh(z); });
        unary("cosh", +[](const Cx& z) { return std::cosh(z); });
        unary("tanh", +[](const Cx& z) { return std::tanh(z); });
        unary("exp", +[](const Cx& z) { return std::exp(z); });
        unary("arcsin", +[](const Cx& z) { return std::asin(z); });
        unary("arccos", +[](const Cx& z) { return std::acos(z); });
        unary("arctan", +[](const Cx& z) { return std::atan(z); });
        t[{"ln", 1}] = [](std::span<const Cx> a, const Env&) {
            if (a[0] == Cx(0.0, 0.0)) throw EvalError("ln(0) pole");
            return std::log(a[0]);
        };
        t[{"sqrt", 1}] = [](std::span<const Cx> a, const Env&) { return std::sqrt(a[0]); };
        t[{"arccot", 1}] = [](std::span<const Cx> a, const Env& env) {
            return arccot_value(a[0], env.convention);
        };
        t[{"factorial", 1}] = [](std::span<const Cx> a, const Env&) {
            return factorial_value(a[0]);
        };
        t[{"doublefactorial", 1}] = [](std::span<const Cx> a, const Env&) {
            return doublefactorial_value(a[0]);
        };
        t[{"JacobiP", 4}] = [](std::span<const Cx> a, const Env&) {
            return jacobi_p(a[0], a[1], a[2], a[3]);
        };
        t[{"LegendreP", 2}] = [](std::span<const Cx> a, const Env&) {
            return legendre_p(a[0], a[1]);
        };
        t[{"LegendreP", 3}] = [](std::span<const Cx> a, const Env&) {
            return legendre_p_assoc(a[0], a[1], a[2]);
        };
        t[{"abs", 1}] = [](std::span<const Cx> a, const Env&) {
            return Cx(std::abs(a[0]), 0.0);
        };
        t[{"Re", 1}] = [](std::span<const Cx> a, const Env&) {
            return Cx(a[0].real(), 0.0);
        };
        t[{"Im", 1}] = [](std::span<const Cx> a, const Env&) {
            return Cx(a[0].imag(), 0.0);
        };
        return t;
    }();
    return table;
}

Cx int_power(Cx base, long long e) {
    if (e == 0) return Cx(1.0, 0.0);
    bool invert = e < 0;
    unsigned long long n = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                  : static_cast<unsigned long long>(e);
    if (base == Cx(0.0, 0.0)) {
        if (invert) throw EvalError("division by zero in an integer power");
        return Cx(0.0, 0.0);
    }
    Cx acc(1.0, 0.0);
    Cx b = base;
    while (n > 0) {
        if (n & 1ULL) acc *= b;
        b *= b;
        n >>= 1ULL;
    }
    return invert ? 1.0 / acc : acc;
}

} // namespace

bool function_registered(const std::string& name, int arity) {
    return registry().count({name, arity}) > 0;
}

std::vector<std::string> unregistered_functions(const CasNode& node) {
    std::vector<std::string> out;
    if (node.kind == CasKind::Function && node.name != "LIST") {
        int arity = static_cast<int>(node.children[0]->children.size());
        if (!function_registered(node.name, arity)) out.push_back(node.name);
    }
    for (const auto& c : node.children)
        for (std::string& name : unregistered_functions(*c))
            if (std::find(out.begin(), out.end(), name) == out.end())
                out.push_back(std::move(name));
    return out;
}

std::complex<double> eval(const CasNode& node, const Env& env) {
    Cx result;
    switch (node.kind) {
    case CasKind::IntPos:
    case CasKind::IntNeg:
        result = Cx(static_cast<double>(node.int_value), 0.0);
        break;
    case CasKind::Rational:
        if (node.denom == 0) throw EvalError("zero denominator");
        result = Cx(static_cast<double>(node.numer) / static_cast<double>(node.denom), 0.0);
        break;
    case CasKind::Float:
    case CasKind::MyFloat:
        // Convert through the decimal spelling: strtod rounds correctly, while
        // mantissa * 10^e can be off by an ulp, which matters under the large
        // argument reductions of the trigonometric functions.
        result = Cx(std::strtod(float_decimal(node.mantissa, node.exponent10).c_str(), nullptr),
                    0.0);
        break;
    case CasKind::Name:
        if (node.name == "Pi") {
            result = Cx(std::numbers::pi, 0.0);
        } else if (node.name == "I") {
            result = Cx(0.0, 1.0);
        } else if (node.name == "infinity") {
            throw EvalError("infinity is not a numeric value");
        } else {
            auto it = env.bindings.find(node.name);
            if (it == env.bindings.end())
                throw EvalError("unbound variable '" + node.name + "'");
            result = it->second;
        }
        break;
    case CasKind::Complex:
        result = eval(*node.children[0], env) + Cx(0.0, 1.0) * eval(*node.children[1], env);
        break;
    case CasKind::Sum: {
        result = Cx(0.0, 0.0);
        for (std::size_t i = 0; i < node.children.size(); ++i)
            result += static_cast<double>(node.sum_factors[i]) * eval(*node.children[i], env);
        break;
    }
    case CasKind::Prod: {
        result = Cx(1.0, 0.0);
        for (const auto& c : node.children) result *= eval(*c, env);
        break;
    }
    case CasKind::Divide: {
        Cx den = eval(*node.children[1], env);
        if (den == Cx(0.0, 0.0)) throw EvalError("division by zero");
        result = eval(*node.children[0], env) / den;
        break;
    }
    case CasKind::Power: {
        const CasNode& e = *node.children[1];
        Cx base = eval(*node.children[0], env);
        if (e.kind == CasKind::IntPos || e.kind == CasKind::IntNeg) {
            result = int_power(base, e.int_value);
            break;
        }
        Cx exp = eval(e, env);
        if (base == Cx(0.0, 0.0)) {
            if (exp == Cx(0.0, 0.0)) result = Cx(1.0, 0.0);
            else if (exp.real() > 0) result = Cx(0.0, 0.0);
            else throw EvalError("zero base with a nonpositive exponent");
            break;
        }
        result = std::pow(base, exp);
        break;
    }
    case CasKind::Function: {
        if (node.name == "LIST") throw EvalError("a list is not a numeric value");
        std::vector<Cx> args;
        for (const auto& a : node.children[0]->children) args.push_back(eval(*a, env));
        auto it = registry().find({node.name, static_cast<int>(args.size())});
        if (it == registry().end())
            throw EvalError("no numeric implementation for '" + node.name + "' with " +
                            std::to_string(args.size()) + " argument(s)");
        result = it->second(std::span<const Cx>(args), env);
        break;
    }
    case CasKind::ExpSeq:
        throw EvalError("an expression sequence is not a numeric value");
    }
    if (!finite(result)) throw EvalError("evaluation overflowed or hit a pole");
    return result;
}

// --- sampling -------------------------------------------------------------------

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

struct Quadrant {
    int re_sign;
    int im_sign;
};

constexpr Quadrant kQuadrants[4] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

Cx draw_value(std::mt19937_64& rng, const VarDomain& v, int point_index) {
    bool spans = v.re_min < 0 && v.re_max > 0 && v.im_min < 0 && v.im_max > 0;
    if (spans && point_index < 4) {
        const Quadrant& q = kQuadrants[point_index];
        double re = q.re_sign > 0 ? uniform(rng, 0.0, v.re_max) : uniform(rng, v.re_min, 0.0);
        double im = q.im_sign > 0 ? uniform(rng, 0.0, v.im_max) : uniform(rng, v.im_min, 0.0);
        return {re, im};
    }
    return {uniform(rng, v.re_min, v.re_max), uniform(rng, v.im_min, v.im_max)};
}

// Cut loci for off_cut(fn, z): reject points within `margin` of the cut.
bool near_cut(const std::string& fn, const Cx& z, double margin) {
    if (fn == "ln" || fn == "sqrt")
        return std::abs(z.imag()) <= margin && z.real() <= margin;
    if (fn == "arctan" || fn == "arccot")
        return std::abs(z.real()) <= margin;
    if (fn == "arcsin" || fn == "arccos")
        return std::abs(z.imag()) <= margin && std::abs(z.real()) >= 1.0 - margin;
    throw ConfigError("off_cut does not know the cut locus of '" + fn + "'");
}

bool point_excluded(const CasNode& predicate, const Env& env) {
    if (predicate.kind != CasKind::Function)
        throw ConfigError("exclusions must be ne(expr,value) or off_cut(fn,var)");
    const auto& args = predicate.children[0]->children;
    if (predicate.name == "ne") {
        if (args.size() != 2) throw ConfigError("ne takes two arguments");
        try {
            return std::abs(eval(*args[0], env) - eval(*args[1], env)) <= 1e-3;
        } catch (const EvalError&) {
            return true; // a pole inside the predicate is as bad as equality
        }
    }
    if (predicate.name == "off_cut") {
        if (args.size() != 2 || args[0]->kind != CasKind::Name ||
            args[1]->kind != CasKind::Name)
            throw ConfigError("off_cut takes a function name and a variable name");
        return near_cut(args[0]->name, eval(*args[1], env), 1e-3);
    }
    throw ConfigError("unknown exclusion predicate '" + predicate.name + "'");
}

} // namespace

std::vector<SamplePoint> sample_points(const DomainSpec& spec, int count,
                                       unsigned long long seed, const Env& base_env) {
    std::vector<SamplePoint> out;
    if (spec.vars.empty()) {
        out.push_back(SamplePoint{});
        return out;
    }
    std::vector<CasPtr> predicates;
    for (const std::string& text : spec.exclusions) {
        try {
            predicates.push_back(parse_cas(text));
        } catch (const ParseError& e) {
            throw ConfigError("bad exclusion '" + text + "': " + e.what());
        }
    }

    std::mt19937_64 rng(seed);
    for (int p = 0; p < count; ++p) {
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
            SamplePoint candidate;
            for (const VarDomain& v : spec.vars)
                candidate.values[v.name] = draw_value(rng, v, p);
            Env env = base_env;
            for (const auto& [name, value] : candidate.values) env.bindings[name] = value;
            accepted = true;
            for (const CasPtr& pred : predicates) {
                if (point_excluded(*pred, env)) {
                    accepted = false;
                    break;
                }
            }
            if (accepted) out.push_back(std::move(candidate));
        }
        if (!accepted)
            throw ConfigError("the sample region keeps violating the exclusions; "
                              "widen the domain or relax them");
    }
    return out;
}

} // namespace texcas
