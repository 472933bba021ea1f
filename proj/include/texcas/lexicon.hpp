#pragma once

#include "texcas/pattern.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace texcas {

// An alternative translation for the same macro under the same target,
// kept for the info log rather than used for output.
struct PatternAlternative {
    TranslationPattern pattern;
    std::string source; // original pattern text
    std::string note;   // typically a branch-cut remark
};

// Target-specific data for one macro entry.
struct TargetSpec {
    TranslationPattern pattern;
    std::string source;       // original pattern text
    std::string link;         // documentation reference in the target system
    std::string note;         // branch-cut / convention remark
    std::vector<PatternAlternative> alternatives;
};

// One semantic macro, under one fixed optional-argument count.
struct MacroEntry {
    std::string macro_name;   // without backslash, e.g. "JacobiP"
    std::string dlmf_snippet; // rendered-form hint, e.g. "P^{(a,b)}_n(x)"
    std::string dlmf_link;
    std::string meaning;
    int num_optional = 0;
    int num_params = 0;
    int num_vars = 0;
    int num_ats = 0;
    std::map<std::string, TargetSpec> targets; // keyed "maple" / "mathematica"

    // Pattern for CAS -> LaTeX; slots index the CAS argument list.
    std::optional<TranslationPattern> backward_pattern;
    std::string backward_source;

    int total_arity() const { return num_optional + num_params + num_vars; }
};

// A non-macro symbol rendering (Greek letters, constants).
struct SymbolEntry {
    std::string latex;                         // without backslash, e.g. "Theta"
    std::map<std::string, std::string> renderings; // per target
    std::string role;                          // "letter" or "constant"
};

// The translation lexicon: semantic macros plus symbol renderings, loaded
// from one or more JSON files (later files override earlier ones).
class Lexicon {
public:
    static Lexicon load(const std::vector<std::string>& paths);

    // Macro variants are keyed by (name, optional-argument count).
    const MacroEntry* lookup(const std::string& macro_name, int optional_count) const;

    // True when any variant of the macro exists (used by the LaTeX parser).
    bool knows_macro(const std::string& macro_name) const;

    const SymbolEntry* symbol(const std::string& latex_name) const;

    // Reverse lookup: Maple-side name -> symbol entry (for CAS -> LaTeX).
    const SymbolEntry* reverse_symbol(const std::string& maple_name) const;

    const std::vector<MacroEntry>& all_entries() const { return entries_; }
    const std::vector<SymbolEntry>& all_symbols() const { return symbols_; }

private:
    std::vector<MacroEntry> entries_;
    std::vector<SymbolEntry> symbols_;
    std::map<std::pair<std::string, int>, std::size_t> by_key_;
    std::map<std::string, std::size_t> symbols_by_latex_;
    std::map<std::string, std::size_t> symbols_by_maple_;

    void index_entry(std::size_t pos);
    void index_symbol(std::size_t pos);
};

} // namespace texcas
