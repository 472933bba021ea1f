#pragma once

#include "texcas/cas_parser.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace texcas {

// Branch-cut convention for multivalued inverse functions. The conventions
// only differ for arccot: Dlmf uses arccot(z) = arctan(1/z), with a finite
// cut on the imaginary segment [-i, i]; Maple uses pi/2 - arctan(z), with
// two infinite cuts along (-i*inf, -i] and [i, i*inf). The two definitions
// agree exactly on the open right half-plane and differ by pi on the left.
enum class Convention { Dlmf, Maple };

struct Env {
    std::map<std::string, std::complex<double>> bindings;
    Convention convention = Convention::Dlmf;
};

// Numeric evaluation over complex doubles, principal branches throughout
// (the closure on a cut itself is whatever the platform libm does; sampling
// is expected to stay off the cuts). Throws EvalError on poles, domain
// violations, unbound names, and functions without an implementation.
std::complex<double> eval(const CasNode& node, const Env& env);

bool function_registered(const std::string& name, int arity);

// Collects every Function name in the tree that has no registered numeric
// implementation (factorial forms and sqrt count as registered).
std::vector<std::string> unregistered_functions(const CasNode& node);

// --- seeded sampling ---------------------------------------------------------

struct VarDomain {
    std::string name;
    double re_min = -1, re_max = 1;
    double im_min = -1, im_max = 1;
};

struct DomainSpec {
    std::vector<VarDomain> vars;
    // Exclusion predicates, e.g. "ne(cos(u),0)" or "off_cut(arccot,z)".
    std::vector<std::string> exclusions;
};

struct SamplePoint {
    std::map<std::string, std::complex<double>> values;
};

// Deterministic sampling of `count` points. When a variable's box spans all
// four quadrants, the first four points put that variable in each quadrant
// once. Points violating an exclusion are rejected and redrawn; a region
// that keeps rejecting raises ConfigError.
std::vector<SamplePoint> sample_points(const DomainSpec& spec, int count,
                                       unsigned long long seed, const Env& base_env);

} // namespace texcas
