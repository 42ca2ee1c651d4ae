// Command-line front end: analyze a group given by a spec, run a single
// theorem check, or sweep the whole corpus. Exit codes: 0 = pass or
// not-applicable/skipped, 1 = a theorem check failed, 2 = usage or parse
// error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pgroup/group_spec.hpp"
#include "pgroup/harness.hpp"
#include "pgroup/word.hpp"

namespace {

struct CliConfig {
    pgroup::Caps caps;
    std::string output = "human";
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    bool structured() const { return output == "structured"; }
};

std::string read_spec_text(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return arg;
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open spec file: " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_report_human(const pgroup::TheoremReport& r) {
    std::cout << "[" << r.theorem << "] " << (r.group.empty() ? "-" : r.group);
    if (r.order) std::cout << " (order " << r.order << ")";
    std::cout << ": " << pgroup::verdict_name(r.verdict);
    for (const auto& [k, v] : r.params) std::cout << " " << k << "=" << v;
    if (!r.quantities.empty()) {
        std::cout << " {";
        bool first = true;
        for (const auto& [k, v] : r.quantities) {
            if (!first) std::cout << ", ";
            std::cout << k << "=" << v;
            first = false;
        }
        std::cout << "}";
    }
    if (!r.witness.empty()) std::cout << " witness: " << r.witness;
    if (!r.notes.empty()) std::cout << " -- " << r.notes;
    std::cout << "\n";
}

void emit_report(const CliConfig& cfg, const pgroup::TheoremReport& r) {
    if (cfg.structured()) {
        nlohmann::json j = r;
        std::cout << j.dump() << "\n";
    } else {
        print_report_human(r);
    }
}

int run_analyze(const CliConfig& cfg, const std::string& spec_arg, bool with_axioms,
                const std::string& word_text) {
    const nlohmann::json spec = pgroup::group_spec::parse(read_spec_text(spec_arg));
    const pgroup::FiniteGroup g = pgroup::group_spec::build(spec, cfg.caps);
    const std::string name = pgroup::group_spec::display_name(spec);

    nlohmann::json out;
    out["group"] = name;
    out["backend"] = g.backend_kind();
    out["order"] = g.order();
    auto p = g.prime();
    if (p) out["p"] = *p;
    if (p || g.order() == 1) {
        out["d"] = pgroup::min_generators(g);
        out["powerful"] = g.order() == 1 ? true : pgroup::is_powerful(g);
    }
    const pgroup::SeriesRecord series = pgroup::lower_central_series(g);
    out["class"] = series.nilpotency_class;
    {
        std::vector<std::uint64_t> orders;
        for (const auto& t : series.terms) orders.push_back(t.order());
        out["lower_central_orders"] = orders;
    }
    out["center_order"] = pgroup::center(g).order();
    if (p) {
        for (int i = 1; i <= 2; ++i) {
            out["omega" + std::to_string(i) + "_set"] = pgroup::omega_set(g, i).count();
            out["omega" + std::to_string(i) + "_subgroup"] = pgroup::omega_subgroup(g, i).order();
            std::uint64_t q = 1;
            for (int t = 0; t < i; ++t) q *= *p;
            out["power_p" + std::to_string(i) + "_order"] = pgroup::detail::power_set(g, q).count();
        }
        if (*p != 2) {
            try {
                out["regular"] = pgroup::is_regular(g, cfg.caps);
            } catch (const pgroup::cap_exceeded& e) {
                out["regular"] = nullptr;
                out["regular_note"] = e.what();
            }
        }
    }
    if (with_axioms) {
        const pgroup::AxiomReport ax = pgroup::check_group_axioms(g, cfg.caps, cfg.seed);
        out["axioms_ok"] = ax.ok;
        out["axioms_exhaustive"] = ax.exhaustive_associativity;
        out["axioms_triples"] = ax.triples_checked;
    }
    if (!word_text.empty()) {
        const pgroup::Word w = pgroup::parse_word(word_text);
        out["word"] = w.to_string();
        pgroup::Subgroup v = w.structured()
                                 ? pgroup::verbal_subgroup(w, g, pgroup::VerbalMode::closed_form, cfg.caps)
                                 : pgroup::verbal_subgroup(w, g, pgroup::VerbalMode::exhaustive, cfg.caps);
        out["verbal_order"] = v.order();
        out["verbal_index"] = g.order() / v.order();
        try {
            const auto om = pgroup::is_omega_maximal(w, g, cfg.caps);
            out["omega_maximal"] = om.maximal;
            if (om.witness) out["omega_maximal_witness_order"] = om.witness->order();
        } catch (const pgroup::cap_exceeded& e) {
            out["omega_maximal"] = nullptr;
            out["omega_maximal_note"] = e.what();
        }
        try {
            out["interchangeable"] = pgroup::is_interchangeable(w, g, cfg.caps).holds;
        } catch (const pgroup::cap_exceeded& e) {
            out["interchangeable"] = nullptr;
            out["interchangeable_note"] = e.what();
        }
    }

    if (cfg.structured()) {
        std::cout << out.dump() << "\n";
        return 0;
    }
    std::cout << "group:    " << name << "  [" << g.backend_kind() << " backend]\n";
    std::cout << "order:    " << g.order();
    if (p) std::cout << " = " << *p << "^" << g.prime_exponent();
    std::cout << "\n";
    if (out.contains("d")) std::cout << "d(G):     " << out["d"] << "\n";
    std::cout << "class:    " << series.nilpotency_class << "  (|gamma_k| =";
    for (const auto& t : series.terms) std::cout << " " << t.order();
    std::cout << ")\n";
    std::cout << "center:   order " << out["center_order"] << "\n";
    if (p) {
        for (int i = 1; i <= 2; ++i)
            std::cout << "Omega_" << i << ":  set " << out["omega" + std::to_string(i) + "_set"]
                      << ", subgroup " << out["omega" + std::to_string(i) + "_subgroup"] << ", |G^{p^" << i
                      << "}| = " << out["power_p" + std::to_string(i) + "_order"] << "\n";
        std::cout << "powerful: " << (out["powerful"].get<bool>() ? "yes" : "no") << "\n";
        if (out.contains("regular")) {
            if (out["regular"].is_null())
                std::cout << "regular:  skipped (" << out["regular_note"].get<std::string>() << ")\n";
            else
                std::cout << "regular:  " << (out["regular"].get<bool>() ? "yes" : "no") << "\n";
        }
    }
    if (with_axioms)
        std::cout << "axioms:   " << (out["axioms_ok"].get<bool>() ? "ok" : "FAIL") << " ("
                  << out["axioms_triples"] << (out["axioms_exhaustive"].get<bool>() ? " triples, exhaustive"
                                                                                    : " sampled triples")
                  << ")\n";
    if (out.contains("word")) {
        std::cout << "word:     " << out["word"].get<std::string>() << "  |w(G)| = " << out["verbal_order"]
                  << ", |G : w(G)| = " << out["verbal_index"] << "\n";
        auto flag = [&](const char* key) -> std::string {
            if (!out.contains(key) || out[key].is_null()) return "skipped (cap)";
            return out[key].get<bool>() ? "yes" : "no";
        };
        std::cout << "          omega-maximal: " << flag("omega_maximal")
                  << ", interchangeable: " << flag("interchangeable") << "\n";
    }
    return 0;
}

int exit_code_for(const std::vector<pgroup::TheoremReport>& reports) {
    return pgroup::all_reports_ok(reports) ? 0 : 1;
}

int run_check(const CliConfig& cfg, const std::string& theorem, const std::string& spec_arg,
              std::int64_t p, int s, int k, int i) {
    std::vector<pgroup::TheoremReport> reports;
    if (theorem == "C") {
        if (p <= 0 || s <= 0) {
            std::cerr << "check C needs --p and --s (hypothesis: odd prime p, s >= p+1)\n";
            return 2;
        }
        reports.push_back(pgroup::check_theorem_C(std::uint64_t(p), s, cfg.caps));
    } else {
        if (spec_arg.empty()) {
            std::cerr << "check " << theorem << " needs a group spec\n";
            return 2;
        }
        const nlohmann::json spec = pgroup::group_spec::parse(read_spec_text(spec_arg));
        const pgroup::FiniteGroup g = pgroup::group_spec::build(spec, cfg.caps);
        const std::string name = pgroup::group_spec::display_name(spec);
        if (theorem == "A") {
            reports.push_back(pgroup::check_theorem_A(g, name, cfg.caps));
        } else if (theorem == "B") {
            if (k <= 0 || i <= 0) {
                std::cerr << "check B needs --k and --i (hypothesis: k <= p-2 and i >= 1, or k = p-1 and i >= 2)\n";
                return 2;
            }
            reports.push_back(pgroup::check_theorem_B(g, k, i, name, cfg.caps));
        } else if (theorem == "HL") {
            reports.push_back(pgroup::check_hethelyi_levai(g, name, cfg.caps));
        } else if (theorem == "L1") {
            reports.push_back(pgroup::check_lemma1_suite(g, name, cfg.caps));
        } else if (theorem == "T2") {
            std::vector<pgroup::CorpusEntry> one{{name, g}};
            pgroup::HarnessConfig hc;
            hc.caps = cfg.caps;
            reports.push_back(pgroup::check_theorem2_suite(one, hc));
        } else {
            std::cerr << "unknown theorem \"" << theorem << "\" (expected A, B, C, HL, L1 or T2)\n";
            return 2;
        }
    }
    for (const auto& r : reports) emit_report(cfg, r);
    return exit_code_for(reports);
}

int run_corpus(const CliConfig& cfg, std::uint64_t p, std::uint64_t max_order,
               std::uint64_t l1_cap, std::uint64_t t2_cap) {
    pgroup::HarnessConfig hc;
    hc.caps = cfg.caps;
    hc.lemma1_order_cap = l1_cap;
    hc.omega_maximal_order_cap = t2_cap;
    // manifest first: name, order, backend per member
    std::vector<std::string> skipped;
    const auto fleet = pgroup::corpus(p, max_order, cfg.caps, &skipped);
    for (const auto& e : fleet) {
        if (cfg.structured()) {
            nlohmann::json j{{"manifest", e.name}, {"order", e.group.order()}, {"backend", e.group.backend_kind()}};
            std::cout << j.dump() << "\n";
        } else {
            std::cout << "member " << e.name << " (order " << e.group.order() << ", "
                      << e.group.backend_kind() << " backend)\n";
        }
    }
    for (const auto& name : skipped) {
        if (cfg.structured()) {
            nlohmann::json j{{"manifest", name}, {"skipped", true}};
            std::cout << j.dump() << "\n";
        } else {
            std::cout << "member " << name << " skipped (exceeds max-order)\n";
        }
    }
    const auto reports = pgroup::run_all(p, max_order, hc, [&](const pgroup::TheoremReport& r) {
        emit_report(cfg, r);
    });
    if (!cfg.structured()) {
        std::size_t pass = 0, fail = 0, na = 0, skip = 0;
        for (const auto& r : reports) {
            switch (r.verdict) {
                case pgroup::Verdict::pass: ++pass; break;
                case pgroup::Verdict::fail: ++fail; break;
                case pgroup::Verdict::not_applicable: ++na; break;
                case pgroup::Verdict::skipped: ++skip; break;
            }
        }
        std::cout << "summary: " << pass << " pass, " << fail << " fail, " << na << " not-applicable, "
                  << skip << " skipped\n";
    }
    return exit_code_for(reports);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact finite p-group calculator and theorem checker"};
    app.require_subcommand(1);

    CliConfig cfg;
    app.add_option("--cap-subgroups", cfg.caps.subgroup_enum_order,
                   "subgroup enumeration order cap")->capture_default_str();
    app.add_option("--cap-tuples", cfg.caps.tuple_cap, "exhaustive verbal tuple cap")->capture_default_str();
    app.add_option("--cap-table", cfg.caps.table_order, "dense table backend cap")->capture_default_str();
    app.add_option("--cap-pairs", cfg.caps.regular_pair_cap, "regularity pair cap")->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for sampled diagnostics")->capture_default_str();
    app.add_option("--output", cfg.output, "output mode")->check(CLI::IsMember({"human", "structured"}))
        ->capture_default_str();

    auto* analyze = app.add_subcommand("analyze", "print structural invariants of a group");
    std::string spec_arg;
    std::string word_text;
    bool with_axioms = false;
    analyze->add_option("spec", spec_arg, "group spec (inline JSON or file path)")->required();
    analyze->add_flag("--with-axioms", with_axioms, "also validate the group axioms");
    analyze->add_option("--word", word_text,
                        "also analyze a word: short(i,k), long(i), or tokens like \"x^9 [y1,y2]\"");

    auto* check = app.add_subcommand("check", "run one theorem check");
    std::string theorem;
    std::string check_spec;
    std::int64_t opt_p = 0;
    int opt_s = 0, opt_k = 0, opt_i = 0;
    check->add_option("theorem", theorem, "A, B, C, HL, L1 or T2")->required();
    check->add_option("spec", check_spec, "group spec (inline JSON or file path)");
    check->add_option("--p", opt_p, "prime parameter");
    check->add_option("--s", opt_s, "exponent parameter s (theorem C)");
    check->add_option("--k", opt_k, "commutator weight k (theorem B)");
    check->add_option("--i", opt_i, "power exponent i (theorem B)");

    auto* corpus_run = app.add_subcommand("corpus-run", "run every suite over the corpus");
    std::uint64_t cp = 3, cmax = 729;
    pgroup::HarnessConfig hc_defaults;
    std::uint64_t l1_cap = hc_defaults.lemma1_order_cap;
    std::uint64_t t2_cap = hc_defaults.omega_maximal_order_cap;
    corpus_run->add_option("--p", cp, "odd prime")->required();
    corpus_run->add_option("--max-order", cmax, "largest member order")->capture_default_str();
    corpus_run->add_option("--l1-order-cap", l1_cap, "interchangeability suite member cap")
        ->capture_default_str();
    corpus_run->add_option("--t2-order-cap", t2_cap, "omega-maximality suite member cap")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return run_analyze(cfg, spec_arg, with_axioms, word_text);
        if (check->parsed()) return run_check(cfg, theorem, check_spec, opt_p, opt_s, opt_k, opt_i);
        if (corpus_run->parsed()) return run_corpus(cfg, cp, cmax, l1_cap, t2_cap);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pgroup::cap_exceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
