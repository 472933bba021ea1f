#pragma once

#include "texcas/cas_parser.hpp"
#include "texcas/lexicon.hpp"

#include <map>
#include <string>
#include <vector>

namespace texcas {

// How one CAS function maps back to a semantic macro.
struct BackwardRule {
    const MacroEntry* entry = nullptr;
    std::string function_name; // Maple-side name, from the forward pattern
    int arity = 0;
    // forward slot filled by each CAS argument position, when the forward
    // pattern's arguments are all plain slots; empty otherwise.
    std::vector<int> slot_permutation;
};

// (function name, arity) -> macro, for every lexicon entry that declares a
// backward pattern. Conflicting keys are a data error.
class BackwardIndex {
public:
    static BackwardIndex build(const Lexicon& lexicon);

    const BackwardRule* find(const std::string& function_name, int arity) const;
    const std::vector<BackwardRule>& rules() const { return rules_; }

private:
    std::vector<BackwardRule> rules_;
    std::map<std::pair<std::string, int>, std::size_t> by_key_;
};

// CAS -> semantic LaTeX. Expects a cosmetic() tree; the string overload
// parses (accepting unevaluation quotes), applies cosmetic, and translates.
std::string translate_back(const CasNode& node, const Lexicon& lexicon);
std::string translate_back(const std::string& maple_text, const Lexicon& lexicon);

} // namespace texcas
