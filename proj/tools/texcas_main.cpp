// texcas: command-line front end for the semantic LaTeX <-> CAS translator.
//
// Exit codes: 0 success, 1 translation or parse failure, 2 verification
// failure, 3 configuration problem (bad options, unreadable data files).

#include "texcas/backward_translator.hpp"
#include "texcas/cas_parser.hpp"
#include "texcas/errors.hpp"
#include "texcas/evaluator.hpp"
#include "texcas/forward_translator.hpp"
#include "texcas/latex_parser.hpp"
#include "texcas/lexicon.hpp"
#include "texcas/verifier.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace texcas;

constexpr int kExitOk = 0;
constexpr int kExitTranslation = 1;
constexpr int kExitVerification = 2;
constexpr int kExitConfig = 3;

const char* cas_kind_name(CasKind k) {
    switch (k) {
    case CasKind::Sum: return "SUM";
    case CasKind::Prod: return "PROD";
    case CasKind::Power: return "POWER";
    case CasKind::Function: return "FUNCTION";
    case CasKind::ExpSeq: return "EXPSEQ";
    case CasKind::IntPos: return "INTPOS";
    case CasKind::IntNeg: return "INTNEG";
    case CasKind::Complex: return "COMPLEX";
    case CasKind::Float: return "FLOAT";
    case CasKind::Rational: return "RATIONAL";
    case CasKind::Name: return "NAME";
    case CasKind::MyFloat: return "MYFLOAT";
    case CasKind::Divide: return "DIVIDE";
    }
    return "?";
}

std::string cas_payload(const CasNode& n) {
    switch (n.kind) {
    case CasKind::IntPos:
    case CasKind::IntNeg:
        return std::to_string(n.int_value);
    case CasKind::Float:
    case CasKind::MyFloat:
        return float_decimal(n.mantissa, n.exponent10);
    case CasKind::Rational:
        return std::to_string(n.numer) + "/" + std::to_string(n.denom);
    case CasKind::Name:
    case CasKind::Function:
        return n.name;
    case CasKind::Sum: {
        std::string signs;
        for (int f : n.sum_factors) signs += f >= 0 ? '+' : '-';
        return signs;
    }
    default:
        return {};
    }
}

void dump_cas_text(const CasNode& n, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(indent) * 2, ' ');
    out += cas_kind_name(n.kind);
    std::string payload = cas_payload(n);
    if (!payload.empty()) {
        out += " ";
        out += payload;
    }
    out += "\n";
    for (const auto& c : n.children) dump_cas_text(*c, indent + 1, out);
}

json dump_cas_json(const CasNode& n) {
    json j{{"kind", cas_kind_name(n.kind)}};
    std::string payload = cas_payload(n);
    if (!payload.empty()) j["value"] = payload;
    if (!n.children.empty()) {
        json kids = json::array();
        for (const auto& c : n.children) kids.push_back(dump_cas_json(*c));
        j["children"] = kids;
    }
    return j;
}

json info_record_json(const InfoRecord& rec) {
    json j{{"macro", rec.macro_name}, {"chosen_pattern", rec.chosen_pattern}};
    if (!rec.dlmf_link.empty()) j["dlmf_link"] = rec.dlmf_link;
    if (!rec.target_link.empty()) j["target_link"] = rec.target_link;
    if (!rec.alternatives_not_taken.empty()) j["alternatives_not_taken"] = rec.alternatives_not_taken;
    if (!rec.branch_cut_note.empty()) j["branch_cut_note"] = rec.branch_cut_note;
    return j;
}

struct Shared {
    std::vector<std::string> lexicon_paths;
    std::string convention = "dlmf";

    Lexicon load_lexicon() const {
        std::vector<std::string> paths = lexicon_paths;
        if (paths.empty())
            paths = {std::string(TEXCAS_DATA_DIR) + "/lexicon.json",
                     std::string(TEXCAS_DATA_DIR) + "/symbols.json"};
        return Lexicon::load(paths);
    }

    Convention conv() const {
        return convention == "maple" ? Convention::Maple : Convention::Dlmf;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bidirectional translator between semantic LaTeX and CAS syntax"};
    app.require_subcommand(1);

    Shared shared;
    app.add_option("--lexicon", shared.lexicon_paths,
                   "Lexicon JSON file(s); later files override earlier entries")
        ->expected(-1);
    app.add_option("--convention", shared.convention,
                   "Branch-cut convention for numeric checks")
        ->check(CLI::IsMember({"dlmf", "maple"}));

    // translate -----------------------------------------------------------
    auto* cmd_translate = app.add_subcommand("translate", "Semantic LaTeX -> CAS");
    std::string tr_input;
    std::string tr_to = "maple";
    bool tr_info = false;
    cmd_translate->add_option("input", tr_input, "Semantic LaTeX expression")->required();
    cmd_translate->add_option("--to", tr_to, "Target system")
        ->check(CLI::IsMember({"maple", "mathematica"}));
    cmd_translate->add_flag("--info", tr_info, "Print translation info records to stderr");

    // backtranslate --------------------------------------------------------
    auto* cmd_back = app.add_subcommand("backtranslate", "Maple CAS -> semantic LaTeX");
    std::string bt_input;
    cmd_back->add_option("input", bt_input, "Maple expression")->required();

    // roundtrip -------------------------------------------------------------
    auto* cmd_round = app.add_subcommand("roundtrip", "Iterate translations to a fixed point");
    std::string rt_input;
    std::string rt_start = "latex";
    int rt_max_cycles = 4;
    cmd_round->add_option("input", rt_input, "Starting expression")->required();
    cmd_round->add_option("--start", rt_start, "System of the input expression")
        ->check(CLI::IsMember({"latex", "maple"}));
    cmd_round->add_option("--max-cycles", rt_max_cycles, "Cycle limit")
        ->check(CLI::PositiveNumber);

    // verify ------------------------------------------------------------------
    auto* cmd_verify = app.add_subcommand("verify", "Verify relation case(s) from a file");
    std::string vf_file;
    std::string vf_id;
    VerifyConfig vf_config;
    cmd_verify->add_option("--case", vf_file, "JSON / JSONL file with relation case(s)")
        ->required();
    cmd_verify->add_option("--id", vf_id, "Verify only the case with this id");
    cmd_verify->add_option("--tol", vf_config.tol, "Relative tolerance");
    cmd_verify->add_option("--points", vf_config.points, "Sample points per case")
        ->check(CLI::PositiveNumber);
    cmd_verify->add_option("--seed", vf_config.seed, "Sampling seed");

    // corpus -------------------------------------------------------------------
    auto* cmd_corpus = app.add_subcommand("corpus", "Run the whole relation corpus");
    std::string cp_file = std::string(TEXCAS_DATA_DIR) + "/corpus.jsonl";
    bool cp_reports = false;
    VerifyConfig cp_config;
    cmd_corpus->add_option("--file", cp_file, "Corpus JSONL file");
    cmd_corpus->add_flag("--reports", cp_reports, "Include per-case reports in the summary");
    cmd_corpus->add_option("--tol", cp_config.tol, "Relative tolerance");
    cmd_corpus->add_option("--points", cp_config.points, "Sample points per case")
        ->check(CLI::PositiveNumber);
    cmd_corpus->add_option("--seed", cp_config.seed, "Sampling seed");

    // lexicon-check ---------------------------------------------------------------
    auto* cmd_lexcheck =
        app.add_subcommand("lexicon-check", "Validate the lexicon and backward index");

    // dump-tree ----------------------------------------------------------------------
    auto* cmd_dump = app.add_subcommand("dump-tree", "Print the parse tree of an expression");
    std::string dt_input;
    std::string dt_lang = "latex";
    std::string dt_format = "text";
    cmd_dump->add_option("input", dt_input, "Expression to parse")->required();
    cmd_dump->add_option("--lang", dt_lang, "Input language")
        ->check(CLI::IsMember({"latex", "maple"}));
    cmd_dump->add_option("--format", dt_format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_translate) {
            Lexicon lexicon = shared.load_lexicon();
            Target target = tr_to == "mathematica" ? Target::Mathematica : Target::Maple;
            TranslationResult result = translate(tr_input, target, lexicon);
            if (tr_info) {
                json records = json::array();
                for (const auto& rec : result.info_log) records.push_back(info_record_json(rec));
                std::cerr << records.dump(2) << "\n";
            }
            std::cout << result.output << "\n";
            return kExitOk;
        }

        if (*cmd_back) {
            Lexicon lexicon = shared.load_lexicon();
            std::cout << translate_back(bt_input, lexicon) << "\n";
            return kExitOk;
        }

        if (*cmd_round) {
            Lexicon lexicon = shared.load_lexicon();
            StartSystem start =
                rt_start == "maple" ? StartSystem::Maple : StartSystem::Latex;
            RoundTripReport report = round_trip(rt_input, start, rt_max_cycles, lexicon);
            for (std::size_t k = 0; k < report.steps.size(); ++k) {
                bool is_latex = (start == StartSystem::Latex) == (k % 2 == 0);
                std::cout << "step " << k << " (" << (is_latex ? "latex" : "maple")
                          << "): " << report.steps[k] << "\n";
            }
            if (report.fixed_point_found) {
                std::cout << "fixed point: step " << report.fixed_point_step
                          << " (cycles used: " << report.cycles_used << ")\n";
                return kExitOk;
            }
            std::cout << "no fixed point within " << rt_max_cycles << " cycle(s)\n";
            return kExitVerification;
        }

        if (*cmd_verify) {
            Lexicon lexicon = shared.load_lexicon();
            vf_config.convention = shared.conv();
            std::vector<RelationCase> cases = load_corpus(vf_file);
            if (!vf_id.empty()) {
                std::vector<RelationCase> picked;
                for (auto& c : cases)
                    if (c.id == vf_id) picked.push_back(std::move(c));
                if (picked.empty())
                    throw ConfigError("no case with id '" + vf_id + "' in " + vf_file);
                cases = std::move(picked);
            }
            bool all_ok = true;
            json out = json::array();
            for (const auto& c : cases) {
                VerdictReport report = verify_case(c, lexicon, vf_config);
                all_ok = all_ok && report.ok();
                out.push_back(json::parse(verdict_to_json(report)));
            }
            if (out.size() == 1)
                std::cout << out[0].dump(2) << "\n";
            else
                std::cout << out.dump(2) << "\n";
            return all_ok ? kExitOk : kExitVerification;
        }

        if (*cmd_corpus) {
            Lexicon lexicon = shared.load_lexicon();
            cp_config.convention = shared.conv();
            std::vector<RelationCase> cases = load_corpus(cp_file);
            CorpusSummary summary = corpus_run(cases, lexicon, cp_config);
            std::cout << summary_to_json(summary, cp_reports) << "\n";
            return summary.failed == 0 ? kExitOk : kExitVerification;
        }

        if (*cmd_lexcheck) {
            Lexicon lexicon = shared.load_lexicon();
            BackwardIndex index = BackwardIndex::build(lexicon);
            std::cout << "macro variants: " << lexicon.all_entries().size() << "\n"
                      << "symbols: " << lexicon.all_symbols().size() << "\n"
                      << "backward rules: " << index.rules().size() << "\n"
                      << "lexicon ok\n";
            return kExitOk;
        }

        if (*cmd_dump) {
            Lexicon lexicon = shared.load_lexicon();
            if (dt_lang == "maple") {
                CasPtr tree = parse_cas(dt_input);
                if (dt_format == "json") {
                    std::cout << dump_cas_json(*tree).dump(2) << "\n";
                } else {
                    std::string out;
                    dump_cas_text(*tree, 0, out);
                    std::cout << out;
                }
            } else {
                PomPtr tree = parse_latex(dt_input, lexicon);
                if (dt_format == "json")
                    std::cout << dump_tree_json(*tree) << "\n";
                else
                    std::cout << dump_tree_text(*tree);
            }
            return kExitOk;
        }
    } catch (const LoadError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const TexcasError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTranslation;
    }
    return kExitConfig;
}
