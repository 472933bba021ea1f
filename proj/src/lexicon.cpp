#include "texcas/lexicon.hpp"

#include "texcas/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace texcas {
namespace {

using nlohmann::json;

std::string str_or(const json& obj, const char* key, const std::string& fallback = "") {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_string())
        throw LoadError(std::string("lexicon field '") + key + "' must be a string");
    return it->get<std::string>();
}

int int_or(const json& obj, const char* key, int fallback = 0) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    if (!it->is_number_integer())
        throw LoadError(std::string("lexicon field '") + key + "' must be an integer");
    return it->get<int>();
}

TargetSpec parse_target(const json& obj, const std::string& where) {
    TargetSpec spec;
    spec.source = str_or(obj, "pattern");
    if (spec.source.empty())
        throw LoadError("missing translation pattern in " + where);
    spec.pattern = TranslationPattern::parse(spec.source);
    spec.link = str_or(obj, "link");
    spec.note = str_or(obj, "note");
    if (auto it = obj.find("alternatives"); it != obj.end()) {
        for (const json& alt : *it) {
            PatternAlternative pa;
            pa.source = str_or(alt, "pattern");
            pa.pattern = TranslationPattern::parse(pa.source);
            pa.note = str_or(alt, "note");
            spec.alternatives.push_back(std::move(pa));
        }
    }
    return spec;
}

MacroEntry parse_entry(const json& obj) {
    MacroEntry e;
    e.macro_name = obj.at("macro").get<std::string>();
    e.dlmf_snippet = str_or(obj, "dlmf");
    e.dlmf_link = str_or(obj, "dlmf_link");
    e.meaning = str_or(obj, "meaning");
    e.num_optional = int_or(obj, "optional");
    e.num_params = int_or(obj, "params");
    e.num_vars = int_or(obj, "vars");
    e.num_ats = int_or(obj, "ats");
    if (e.num_optional < 0 || e.num_params < 0 || e.num_vars < 0 || e.num_ats < 0)
        throw LoadError("negative arity field on macro " + e.macro_name);

    const json& targets = obj.at("targets");
    for (auto it = targets.begin(); it != targets.end(); ++it)
        e.targets[it.key()] = parse_target(it.value(), e.macro_name + "/" + it.key());
    if (e.targets.empty())
        throw LoadError("macro " + e.macro_name + " declares no targets");

    for (const auto& [tname, tspec] : e.targets) {
        if (tspec.pattern.max_slot() + 1 > e.total_arity())
            throw LoadError("macro " + e.macro_name + " target " + tname +
                            " references slot $" + std::to_string(tspec.pattern.max_slot()) +
                            " beyond arity " + std::to_string(e.total_arity()));
    }

    if (auto it = obj.find("backward"); it != obj.end() && !it->is_null()) {
        e.backward_source = it->get<std::string>();
        e.backward_pattern = TranslationPattern::parse(e.backward_source);
    }
    return e;
}

SymbolEntry parse_symbol(const json& obj) {
    SymbolEntry s;
    s.latex = obj.at("symbol").get<std::string>();
    s.role = str_or(obj, "role", "letter");
    const json& renderings = obj.at("targets");
    for (auto it = renderings.begin(); it != renderings.end(); ++it)
        s.renderings[it.key()] = it.value().get<std::string>();
    return s;
}

} // namespace

Lexicon Lexicon::load(const std::vector<std::string>& paths) {
    if (paths.empty()) throw LoadError("no lexicon files given");
    Lexicon lex;
    for (const std::string& path : paths) {
        std::ifstream in(path);
        if (!in) throw LoadError("cannot open lexicon file: " + path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw LoadError("invalid JSON in " + path + ": " + e.what());
        }
        if (!doc.is_array())
            throw LoadError("lexicon file must hold a JSON array: " + path);
        for (const json& obj : doc) {
            try {
                if (obj.contains("macro")) {
                    MacroEntry entry = parse_entry(obj);
                    auto key = std::make_pair(entry.macro_name, entry.num_optional);
                    if (auto it = lex.by_key_.find(key); it != lex.by_key_.end()) {
                        lex.entries_[it->second] = std::move(entry); // later file wins
                    } else {
                        lex.entries_.push_back(std::move(entry));
                        lex.index_entry(lex.entries_.size() - 1);
                    }
                } else if (obj.contains("symbol")) {
                    SymbolEntry sym = parse_symbol(obj);
                    if (auto it = lex.symbols_by_latex_.find(sym.latex);
                        it != lex.symbols_by_latex_.end()) {
                        lex.symbols_[it->second] = std::move(sym);
                    } else {
                        lex.symbols_.push_back(std::move(sym));
                        lex.index_symbol(lex.symbols_.size() - 1);
                    }
                } else {
                    throw LoadError("entry is neither a macro nor a symbol");
                }
            } catch (const json::exception& e) {
                throw LoadError("malformed entry in " + path + ": " + e.what());
            }
        }
    }
    // Rebuild the reverse symbol map so overrides replace stale rows.
    lex.symbols_by_maple_.clear();
    for (std::size_t i = 0; i < lex.symbols_.size(); ++i) {
        auto it = lex.symbols_[i].renderings.find("maple");
        if (it != lex.symbols_[i].renderings.end())
            lex.symbols_by_maple_[it->second] = i;
    }
    return lex;
}

void Lexicon::index_entry(std::size_t pos) {
    const MacroEntry& e = entries_[pos];
    by_key_[{e.macro_name, e.num_optional}] = pos;
}

void Lexicon::index_symbol(std::size_t pos) {
    symbols_by_latex_[symbols_[pos].latex] = pos;
}

const MacroEntry* Lexicon::lookup(const std::string& macro_name, int optional_count) const {
    auto it = by_key_.find({macro_name, optional_count});
    return it == by_key_.end() ? nullptr : &entries_[it->second];
}

bool Lexicon::knows_macro(const std::string& macro_name) const {
    auto it = by_key_.lower_bound({macro_name, 0});
    return it != by_key_.end() && it->first.first == macro_name;
}

const SymbolEntry* Lexicon::symbol(const std::string& latex_name) const {
    auto it = symbols_by_latex_.find(latex_name);
    return it == symbols_by_latex_.end() ? nullptr : &symbols_[it->second];
}

const SymbolEntry* Lexicon::reverse_symbol(const std::string& maple_name) const {
    auto it = symbols_by_maple_.find(maple_name);
    return it == symbols_by_maple_.end() ? nullptr : &symbols_[it->second];
}

} // namespace texcas
