#pragma once

#include "texcas/latex_parser.hpp"
#include "texcas/lexicon.hpp"

#include <string>
#include <vector>

namespace texcas {

enum class Target { Maple, Mathematica };

std::string target_key(Target target);      // "maple" / "mathematica"

enum class FragmentRole { Operand, Operator, Relation, Ellipsis };

// One translated chunk of a sequence, before multiplication insertion.
struct TeoFragment {
    std::string text;
    bool grouped = false; // self-delimiting: never needs extra parentheses
    FragmentRole role = FragmentRole::Operand;
};

// One info-log record: why a macro translated the way it did.
struct InfoRecord {
    std::string macro_name;
    std::string dlmf_link;
    std::string target_link;
    std::string chosen_pattern;
    std::vector<std::string> alternatives_not_taken;
    std::string branch_cut_note;
};

struct TranslationResult {
    std::string output;
    std::vector<InfoRecord> info_log;
    Target target = Target::Maple;
};

// Optional audit of the tree walk, used by tests to check full coverage.
struct VisitAudit {
    std::size_t nodes_total = 0;
    std::size_t nodes_visited = 0;
};

TranslationResult translate(const PomNode& root, Target target, const Lexicon& lexicon,
                            VisitAudit* audit = nullptr);

// Convenience: parse + translate.
TranslationResult translate(const std::string& latex, Target target, const Lexicon& lexicon,
                            VisitAudit* audit = nullptr);

} // namespace texcas
