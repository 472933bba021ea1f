#pragma once

#include "texcas/cas_parser.hpp"
#include "texcas/evaluator.hpp"
#include "texcas/forward_translator.hpp"
#include "texcas/lexicon.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace texcas {

// --- round trips ------------------------------------------------------------

enum class StartSystem { Latex, Maple };

// steps[0] is the input; each later step is the alternate-system translation
// of the previous one. A fixed point is two steps that reproduce an earlier
// step in the same system: steps[k] == steps[k-2].
struct RoundTripReport {
    std::vector<std::string> steps;
    bool fixed_point_found = false;
    std::size_t fixed_point_step = 0; // the k-2 above, when found
    int cycles_used = 0;              // one cycle = two steps
};

RoundTripReport round_trip(const std::string& input, StartSystem start, int max_cycles,
                           const Lexicon& lexicon);

// --- relation cases -----------------------------------------------------------

struct RelationCase {
    std::string id;
    std::string lhs; // semantic LaTeX
    std::string rhs;
    DomainSpec domain;
    std::string ref;          // documentation reference for the identity
    bool exp_rewrite = false; // allow the exponential rewrite in tier 1
};

std::vector<RelationCase> load_corpus(const std::string& path);

// --- structural tier ------------------------------------------------------------

// Canonical form for structural comparison: exact Gaussian-rational constant
// folding, flatten/sort/merge of sums and products, exponential merging.
// With exp_rewrite, circular and hyperbolic sin/cos are first rewritten into
// exponentials and products are distributed over sums (bounded by an
// internal node budget; exceeding it reports inconclusive).
CasPtr canonicalize(const CasNode& tree, bool exp_rewrite = false);

enum class StructuralVerdict { Equal, Inconclusive };

StructuralVerdict structural_compare(const CasNode& lhs, const CasNode& rhs,
                                     bool exp_rewrite);

// --- numeric tier ---------------------------------------------------------------

struct VerifyConfig {
    double tol = 1e-9;
    int points = 20;
    unsigned long long seed = 20260817ULL;
    Convention convention = Convention::Dlmf;
};

struct PointResult {
    std::map<std::string, std::complex<double>> point;
    double abs_diff = 0.0;
    double rel_scale = 1.0; // max(1, |lhs|)
    bool passed = false;
    std::string error; // evaluation failure, when any
};

struct VerdictReport {
    std::string id;
    bool translated = false;
    std::string lhs_maple;
    std::string rhs_maple;
    std::string structural; // "equal" | "inconclusive"
    std::string numeric;    // "pass" | "fail" | "skipped"
    std::vector<PointResult> points;
    std::string cause_hint; // only on numeric failure
    std::string error;      // translation / configuration problems

    bool ok() const {
        return translated && (structural == "equal" || numeric == "pass");
    }
};

VerdictReport verify_case(const RelationCase& relation, const Lexicon& lexicon,
                          const VerifyConfig& config);

std::string verdict_to_json(const VerdictReport& report);

// --- corpus ---------------------------------------------------------------------

struct CorpusSummary {
    int cases = 0;
    int translated = 0;
    int structural_equal = 0;
    int numeric_pass = 0;
    int numeric_skipped = 0;
    int failed = 0;
    std::vector<VerdictReport> reports;

    double translated_pct() const;
    double structural_pct() const; // of translated
    double numeric_pct() const;    // of the structurally inconclusive remainder
};

CorpusSummary corpus_run(const std::vector<RelationCase>& cases, const Lexicon& lexicon,
                         const VerifyConfig& config);

std::string summary_to_json(const CorpusSummary& summary, bool include_reports);

} // namespace texcas
