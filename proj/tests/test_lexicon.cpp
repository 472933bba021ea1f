#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "texcas/errors.hpp"
#include "texcas/lexicon.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using texcas::Lexicon;
using texcas::LoadError;
using texcas::MacroEntry;

namespace {

const std::string kLexiconPath = TEXCAS_DATA_DIR "/lexicon.json";
const std::string kSymbolsPath = TEXCAS_DATA_DIR "/symbols.json";

Lexicon standard_lexicon() { return Lexicon::load({kLexiconPath, kSymbolsPath}); }

// Writes `content` to a fresh temp file and returns its path.
std::string write_temp(const std::string& content) {
    static int counter = 0;
    auto path = std::filesystem::temp_directory_path() /
                ("texcas_lexicon_test_" + std::to_string(++counter) + ".json");
    std::ofstream out(path);
    out << content;
    out.close();
    return path.string();
}

template <class F>
std::string load_error_of(F&& f) {
    try {
        f();
    } catch (const LoadError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("standard files load with the expected inventory") {
    Lexicon lex = standard_lexicon();
    CHECK(lex.all_entries().size() >= 21);
    CHECK(lex.all_symbols().size() >= 42);

    const MacroEntry* sin = lex.lookup("sin", 0);
    REQUIRE(sin != nullptr);
    CHECK(sin->num_vars == 1);
    CHECK(sin->num_ats == 2);
    CHECK(sin->total_arity() == 1);
    CHECK(sin->targets.at("maple").source == "sin($0)");
    CHECK(sin->targets.at("mathematica").source == "Sin[$0]");
    CHECK(sin->backward_pattern.has_value());
    CHECK(sin->dlmf_link.find("dlmf.nist.gov") != std::string::npos);

    CHECK(lex.lookup("sin", 1) == nullptr); // no optional-argument variant
    CHECK(lex.knows_macro("sin"));
    CHECK(lex.knows_macro("JacobiP"));
    CHECK_FALSE(lex.knows_macro("NoSuchMacro"));
}

TEST_CASE("variants of one macro are keyed by optional-argument count") {
    Lexicon lex = standard_lexicon();

    const MacroEntry* base = lex.lookup("LegendreP", 0);
    const MacroEntry* assoc = lex.lookup("LegendreP", 1);
    REQUIRE(base != nullptr);
    REQUIRE(assoc != nullptr);
    CHECK(base != assoc);
    CHECK(base->num_optional == 0);
    CHECK(base->total_arity() == 2);
    CHECK(base->targets.at("maple").source == "LegendreP($0,$1)");
    CHECK(assoc->num_optional == 1);
    CHECK(assoc->total_arity() == 3);
    CHECK(assoc->targets.at("maple").source == "LegendreP($1,$0,$2)");

    const MacroEntry* d1 = lex.lookup("deriv", 0);
    const MacroEntry* dn = lex.lookup("deriv", 1);
    REQUIRE(d1 != nullptr);
    REQUIRE(dn != nullptr);
    CHECK(d1->targets.at("maple").source == "diff($0, $1)");
    CHECK(dn->targets.at("maple").source == "diff($1, [$2$($0)])");
}

TEST_CASE("alternatives and convention notes survive loading") {
    Lexicon lex = standard_lexicon();
    const MacroEntry* acot = lex.lookup("acot", 0);
    REQUIRE(acot != nullptr);
    const auto& maple = acot->targets.at("maple");
    CHECK(maple.note.find("convention") != std::string::npos);
    REQUIRE(maple.alternatives.size() == 2);
    CHECK(maple.alternatives[0].source == "arctan(1/($0))");
    CHECK(maple.alternatives[1].source == "(I/2)*ln(($0-I)/($0+I))");
    CHECK_FALSE(maple.alternatives[0].note.empty());
    CHECK_FALSE(acot->targets.at("mathematica").note.empty());
}

TEST_CASE("symbol table lookups, both directions") {
    Lexicon lex = standard_lexicon();

    const auto* theta = lex.symbol("Theta");
    REQUIRE(theta != nullptr);
    CHECK(theta->renderings.at("maple") == "Theta");
    CHECK(theta->renderings.at("mathematica") == "\\[CapitalTheta]");
    CHECK(theta->role == "letter");

    const auto* cpi = lex.symbol("cpi");
    REQUIRE(cpi != nullptr);
    CHECK(cpi->renderings.at("maple") == "Pi");
    CHECK(cpi->role == "constant");

    const auto* rev = lex.reverse_symbol("Pi");
    REQUIRE(rev != nullptr);
    CHECK(rev->latex == "cpi");
    const auto* rev2 = lex.reverse_symbol("alpha");
    REQUIRE(rev2 != nullptr);
    CHECK(rev2->latex == "alpha");

    CHECK(lex.symbol("NoSuchSymbol") == nullptr);
    CHECK(lex.reverse_symbol("NoSuchName") == nullptr);
}

TEST_CASE("later files override earlier entries with the same key") {
    std::string override_file = write_temp(R"json([
      {
        "macro": "sin",
        "dlmf": "\\sin@@{z}",
        "dlmf_link": "https://dlmf.nist.gov/4.14",
        "meaning": "circular sine, shouty",
        "vars": 1,
        "ats": 2,
        "targets": {"maple": {"pattern": "SIN($0)"}},
        "backward": "\\sin@{$0}"
      }
    ])json");
    Lexicon lex = Lexicon::load({kLexiconPath, kSymbolsPath, override_file});
    const MacroEntry* sin = lex.lookup("sin", 0);
    REQUIRE(sin != nullptr);
    CHECK(sin->targets.at("maple").source == "SIN($0)");
    // Unrelated entries are untouched.
    REQUIRE(lex.lookup("cos", 0) != nullptr);
    CHECK(lex.lookup("cos", 0)->targets.at("maple").source == "cos($0)");
}

TEST_CASE("a pattern slot at or beyond the arity is rejected, naming the entry") {
    std::string bad = write_temp(R"json([
      {
        "macro": "badslot",
        "vars": 1,
        "ats": 1,
        "targets": {"maple": {"pattern": "bad($0,$1)"}}
      }
    ])json");
    auto msg = load_error_of([&] { Lexicon::load({bad}); });
    CHECK(msg.find("badslot") != std::string::npos);
    CHECK(msg.find("$1") != std::string::npos);
    CHECK(msg.find("arity 1") != std::string::npos);
}

TEST_CASE("negative arity fields are rejected") {
    std::string bad = write_temp(R"json([
      {"macro": "negative", "vars": -1, "ats": 0,
       "targets": {"maple": {"pattern": "neg()"}}}
    ])json");
    auto msg = load_error_of([&] { Lexicon::load({bad}); });
    CHECK(msg.find("negative") != std::string::npos);
    CHECK(msg.find("arity") != std::string::npos);
}

TEST_CASE("an entry without targets is rejected") {
    std::string bad = write_temp(R"json([
      {"macro": "emptyish", "vars": 1, "ats": 1, "targets": {}}
    ])json");
    auto msg = load_error_of([&] { Lexicon::load({bad}); });
    CHECK(msg.find("emptyish") != std::string::npos);
    CHECK(msg.find("no targets") != std::string::npos);
}

TEST_CASE("unreadable or malformed files are rejected") {
    CHECK_THROWS_AS((void)Lexicon::load({"/no/such/path.json"}), LoadError);
    std::string mangled = write_temp("{ not json ]");
    CHECK_THROWS_AS((void)Lexicon::load({mangled}), LoadError);
}

TEST_CASE("an empty path list is refused outright") {
    auto msg = load_error_of([] { Lexicon::load({}); });
    CHECK(msg.find("no lexicon files") != std::string::npos);
}
