#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "texcas/backward_translator.hpp"
#include "texcas/errors.hpp"
#include "texcas/forward_translator.hpp"
#include "texcas/verifier.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace texcas;

namespace {

const Lexicon& lex() {
    static Lexicon lexicon = Lexicon::load(
        {std::string(TEXCAS_DATA_DIR) + "/lexicon.json", std::string(TEXCAS_DATA_DIR) + "/symbols.json"});
    return lexicon;
}

std::string back(const std::string& maple) { return translate_back(maple, lex()); }

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

std::string write_temp(const std::string& text) {
    static int counter = 0;
    auto path = std::filesystem::temp_directory_path() /
                ("texcas_backward_" + std::to_string(++counter) + ".json");
    std::ofstream out(path);
    out << text;
    return path.string();
}

} // namespace

TEST_CASE("function calls map back to semantic macros") {
    CHECK(back("sin(x)") == "\\sin@{x}");
    CHECK(back("exp(x)") == "\\exp@{x}");
    CHECK(back("arctan(sinh(x))") == "\\atan@{\\sinh@{x}}");
    CHECK(back("arccot(z)") == "\\acot@{z}");
    CHECK(back("BesselK(0,x)") == "\\BesselK{0}@{x}");
}

TEST_CASE("argument order is permuted back through the forward pattern") {
    // Maple's JacobiP takes (n, alpha, beta, x); the macro's parameter order
    // is (alpha, beta, n) followed by the variable.
    CHECK(back("JacobiP(n,alpha,beta,cos(a*Theta))") ==
          "\\JacobiP{\\alpha}{\\beta}{n}@{\\cos@{a\\idot\\Theta}}");
}

TEST_CASE("arity chooses between macro variants") {
    CHECK(back("LegendreP(nu,x)") == "\\LegendreP{\\nu}@{x}");
    CHECK(back("LegendreP(nu,mu,x)") == "\\LegendreP[\\mu]{\\nu}@{x}");
}

TEST_CASE("non-slot forward arguments reverse by local inversion") {
    // EllipticF's first forward argument is sin($0), so the reverse applies
    // arcsin around whatever sits in that position.
    CHECK(back("EllipticF(sin(phi),k)") == "\\EllIntF@{\\asin@{\\sin@{\\phi}}}{k}");
}

TEST_CASE("arithmetic spellings") {
    CHECK(back("sin(x)+cos(y)") == "\\sin@{x}+\\cos@{y}");
    CHECK(back("x-y") == "x-y");
    CHECK(back("-x") == "-x");
    CHECK(back("-2*x") == "-2\\idot x");
    CHECK(back("x*y^2") == "x\\idot y^{2}");
    CHECK(back("(x+1)^2") == "\\left(x+1\\right)^{2}");
    CHECK(back("a^b*c^d") == "a^{b}\\idot c^{d}");
    CHECK(back("x^y") == "x^{y}");
    // Equations are not expressions; relation sides are translated separately.
    CHECK(message_of([] { (void)back("x = y"); }) ==
          "unexpected character '=' in CAS input (at position 2)");
}

TEST_CASE("powers with special exponents") {
    CHECK(back("sqrt(x)") == "\\sqrt{x}");
    CHECK(back("x^(1/2)") == "\\sqrt{x}");
    CHECK(back("x^(-1)") == "\\frac{1}{x}");
    CHECK(back("x^(3/2)") == "x^{\\frac{3}{2}}");
}

TEST_CASE("quotients become fractions") {
    CHECK(back("(cos(a*Theta))/(2)") == "\\frac{1}{2}\\idot\\cos@{a\\idot\\Theta}");
    CHECK(back("(1)/(2)*cos(a*Theta)") == "\\frac{1}{2}\\idot\\cos@{a\\idot\\Theta}");
    CHECK(back("5/10") == "\\frac{5}{10}");
}

TEST_CASE("numbers, constants, and the imaginary unit") {
    CHECK(back("0.5") == "0.5");
    CHECK(back("3.50*x^2") == "3.50\\idot x^{2}");
    CHECK(back("I") == "\\iunit");
    CHECK(back("-I") == "-\\iunit");
    CHECK(back("2*I") == "2\\idot\\iunit");
    CHECK(back("1-I") == "1-\\iunit");
    CHECK(back("Pi*alpha") == "\\cpi\\idot\\alpha");
    CHECK(back("infinity") == "\\infty");
    CHECK(back("e") == "e"); // a plain name, not the constant
}

TEST_CASE("factorials render postfix") {
    CHECK(back("factorial(5)") == "5!");
    CHECK(back("doublefactorial(n)") == "n!!");
    CHECK(back("factorial(n^m)") == "(n^{m})!");
}

TEST_CASE("the string overload accepts unevaluation quotes") {
    CHECK(back("'sin(x)'") == "\\sin@{x}");
}

TEST_CASE("unknown functions and lists are reported, not guessed") {
    CHECK(message_of([] { (void)back("Wronskian([f,g],x)"); }) ==
          "no reverse translation for the CAS function 'Wronskian' with 2 argument(s)");
    CHECK(message_of([] { (void)back("BlahFn(x)"); }) ==
          "no reverse translation for the CAS function 'BlahFn' with 1 argument(s)");
    // diff and the arctan(sinh) spelling of the Gudermannian have forward
    // patterns too irregular for a reverse rule.
    CHECK(message_of([] { (void)back("diff(x^2, y)"); }) ==
          "no reverse translation for the CAS function 'diff' with 2 argument(s)");
    CHECK(message_of([] { (void)back("Gudermannian(x)"); }) ==
          "no reverse translation for the CAS function 'Gudermannian' with 1 argument(s)");
    CHECK(message_of([] { (void)back("[a,b]"); }) == "a CAS list has no semantic LaTeX form");
}

TEST_CASE("backward index exposes its rules") {
    BackwardIndex index = BackwardIndex::build(lex());
    CHECK(index.rules().size() == 17);

    const BackwardRule* sin_rule = index.find("sin", 1);
    REQUIRE(sin_rule != nullptr);
    CHECK(sin_rule->entry->macro_name == "sin");
    CHECK(sin_rule->arity == 1);
    CHECK(sin_rule->slot_permutation == std::vector<int>{0});

    const BackwardRule* jacobi = index.find("JacobiP", 4);
    REQUIRE(jacobi != nullptr);
    CHECK(jacobi->entry->macro_name == "JacobiP");
    CHECK(jacobi->slot_permutation == std::vector<int>{2, 0, 1, 3});

    // EllipticF's forward arguments are not all plain slots, so no
    // permutation is recorded.
    const BackwardRule* elliptic = index.find("EllipticF", 2);
    REQUIRE(elliptic != nullptr);
    CHECK(elliptic->slot_permutation.empty());

    CHECK(index.find("BesselK", 2) != nullptr);
    CHECK(index.find("BesselK", 1) == nullptr);
    CHECK(index.find("sin", 2) == nullptr);
    CHECK(index.find("Wronskian", 2) == nullptr);
    CHECK(index.find("diff", 2) == nullptr);
}

TEST_CASE("conflicting backward rules are a load-time error") {
    std::string two = R"json([
      {"macro": "alphafn", "dlmf": "\\alphafn@{z}", "meaning": "first",
       "params": 0, "vars": 1, "ats": 1,
       "targets": {"maple": {"pattern": "samefn($0)"}},
       "backward": "\\alphafn@{$0}"},
      {"macro": "betafn", "dlmf": "\\betafn@{z}", "meaning": "second",
       "params": 0, "vars": 1, "ats": 1,
       "targets": {"maple": {"pattern": "samefn($0)"}},
       "backward": "\\betafn@{$0}"}
    ])json";
    Lexicon small = Lexicon::load({write_temp(two)});
    std::string msg = message_of([&] { (void)BackwardIndex::build(small); });
    CHECK(msg == "backward index conflict: samefn/1 maps to both \\alphafn and \\betafn");
}

TEST_CASE("a backward slot beyond the function arity is a load-time error") {
    std::string bad = R"json([
      {"macro": "narrow", "dlmf": "\\narrow@{z}", "meaning": "one argument",
       "params": 0, "vars": 1, "ats": 1,
       "targets": {"maple": {"pattern": "narrowfn($0)"}},
       "backward": "\\narrow@{$1}"}
    ])json";
    Lexicon small = Lexicon::load({write_temp(bad)});
    std::string msg = message_of([&] { (void)BackwardIndex::build(small); });
    CHECK(msg ==
          "backward pattern of \\narrow references slot $1 but narrowfn only takes 1 argument(s)");
}

TEST_CASE("corpus round trips never leave inert scaffolding in the LaTeX") {
    auto cases = load_corpus(std::string(TEXCAS_DATA_DIR) + "/corpus.jsonl");
    REQUIRE(cases.size() >= 50);
    int translated = 0;
    for (const RelationCase& relation : cases) {
        for (const std::string& side : {relation.lhs, relation.rhs}) {
            std::string maple = translate(side, Target::Maple, lex()).output;
            std::string latex;
            try {
                latex = translate_back(maple, lex());
            } catch (const TranslationError&) {
                continue; // sides using diff/Wronskian have no reverse form
            }
            ++translated;
            CAPTURE(std::string(maple));
            CHECK(latex.find("+ (-1)") == std::string::npos);
            CHECK(latex.find("+(-1)") == std::string::npos);
            CHECK(latex.find("^(-1)") == std::string::npos);
            CHECK(latex.find("^{-1}") == std::string::npos);
        }
    }
    CHECK(translated > 80);
}
