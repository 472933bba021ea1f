#pragma once

#include <memory>
#include <string>
#include <vector>

namespace texcas {

// Inert Maple-style expression forms. Sum/Prod/Power/Function/ExpSeq and the
// literal kinds come out of the parser; MyFloat and Divide are display-only
// forms introduced by the cosmetic pass and never produced by parsing.
enum class CasKind {
    Sum,      // children = terms, sum_factors = matching +1/-1 factors
    Prod,     // children = factors
    Power,    // children = {base, exponent}
    Function, // name + one ExpSeq child holding the arguments
    ExpSeq,   // children = items
    IntPos,   // int_value >= 0
    IntNeg,   // int_value < 0
    Complex,  // children = {re, im}, both numeric literals
    Float,    // mantissa * 10^exponent10
    Rational, // numer/denom, denom > 0, never reduced
    Name,
    MyFloat,  // display form of Float
    Divide,   // display form: children = {numerator, denominator}
};

struct CasNode;
using CasPtr = std::unique_ptr<CasNode>;

struct CasNode {
    CasKind kind;
    std::vector<CasPtr> children;
    long long int_value = 0;   // IntPos / IntNeg
    long long mantissa = 0;    // Float / MyFloat
    int exponent10 = 0;        // Float / MyFloat
    long long numer = 0;       // Rational
    long long denom = 1;       // Rational
    std::string name;          // Name / Function
    std::vector<int> sum_factors; // Sum only

    explicit CasNode(CasKind k) : kind(k) {}
};

CasPtr clone(const CasNode& node);
bool structural_equal(const CasNode& a, const CasNode& b);

// Negation without evaluation: literals fold the sign, sums flip factors,
// products gain (or fold into) a numeric factor.
CasPtr negate(CasPtr node);

struct CasParseOptions {
    bool unevaluated = false; // accept one pair of outer '...' quotes
};

CasPtr parse_cas(const std::string& source, const CasParseOptions& opts = {});

// Display transformation: numeric factors to the front, reciprocal powers to
// rationals or fractions, floats to plain decimals. Idempotent; performs no
// arithmetic beyond these rewrites.
CasPtr cosmetic(CasPtr node);

// Renders Maple syntax. parse_cas(render_cas(t)) is structurally equal to t
// for every parser-produced tree.
std::string render_cas(const CasNode& node);

// Convenience wrappers for building literals in tests and rewriting passes.
CasPtr make_int(long long value);
CasPtr make_name(std::string name);
CasPtr make_rational(long long numer, long long denom);

// Decimal text of mantissa * 10^exp10 with every mantissa digit preserved,
// e.g. (150, -2) -> "1.50".
std::string float_decimal(long long mantissa, int exp10);

} // namespace texcas
