#include "pomset/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pomset/bv.hpp"
#include "pomset/dicograph.hpp"
#include "pomset/formula.hpp"
#include "pomset/rbnet.hpp"
#include "pomset/reductions.hpp"
#include "pomset/sequent.hpp"

namespace pomset {

namespace {

using nlohmann::json;

const char* kCounterexample = "[(<a;b> * <c;d>) | (<e;f> * <g;h>) | <a';h'> | <e';b'> | <g';d'> | <c';f'>]";

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    long long budget = -1;
    bool json = false;
    std::string dot;
    std::string system = "bv";
    std::string mode = "cographic";
};

class Runner {
public:
    Runner(std::istream& in, std::ostream& out, const Options& o) : in_(in), out_(out), o_(o) {
        budget_.limit = o.budget;
    }

    std::string text(const std::string& arg) {
        if (arg != "-") return arg;
        std::stringstream ss;
        ss << in_.rdbuf();
        return ss.str();
    }

    std::string file(const std::string& path) {
        if (path == "-") return text(path);
        std::ifstream f(path);
        if (!f) throw InputError("cannot read " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    Formula formula(const std::string& arg) { return parse_formula(trim(text(arg))); }
    Sequent sequent(const std::string& arg) { return parse_sequent(trim(text(arg))); }

    CnfInstance cnf(const std::string& path) {
        std::string t = file(path);
        if (t.find("p cnf") != std::string::npos) return parse_dimacs(t);
        return parse_cnf(trim(t));
    }

    NetMode mode() const {
        if (o_.mode == "cographic") return NetMode::Cographic;
        if (o_.mode == "tree") return NetMode::Tree;
        throw InputError("unknown mode " + o_.mode);
    }

    System system(bool derivation) const {
        const std::string& s = o_.system;
        if (s == "bv") return derivation ? System::SBV : System::BV;
        if (s == "bvu") return derivation ? System::SBVu : System::BVu;
        if (s == "bvhatu" && !derivation) return System::BVhatu;
        if (s == "sbvu-noninteraction") return System::NonInteraction;
        if (s == "ws") return System::NonInteractionWs;
        if (auto p = parse_system(s)) return *p;
        throw InputError("unknown system " + s);
    }

    Budget* budget() { return o_.budget >= 0 ? &budget_ : nullptr; }

    // Prints either the JSON object or the plain text.
    void emit(const json& j, const std::string& plain) {
        if (o_.json) out_ << j.dump(2) << "\n";
        else if (!plain.empty()) out_ << plain << (plain.back() == '\n' ? "" : "\n");
    }

    void dot(const std::string& content) {
        if (o_.dot.empty()) return;
        std::ofstream f(o_.dot);
        if (!f) throw InputError("cannot write " + o_.dot);
        f << content;
    }

    static std::string trim(std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        return s.substr(b);
    }

    std::istream& in_;
    std::ostream& out_;
    Options o_;
    Budget budget_;
};

json cycle_json(const RBDigraph& g, const AeCycle& c) {
    json j = {{"vertices", c.verts}, {"text", cycle_str(g, c)}};
    return j;
}

Linking parse_linking(const std::string& s) {
    Linking l;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) l.push_back(std::stoi(item));
    return l;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pomset logic and BV: proof search, proof nets and reductions", "pomset"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--budget", o.budget, "work limit for exponential searches");
    app.add_flag("--json", o.json, "machine-readable output");
    app.add_option("--dot", o.dot, "also write a Graphviz file");
    app.add_option("--system", o.system, "bv, bvu, bvhatu, sbvu-noninteraction or ws");
    app.add_option("--mode", o.mode, "cographic or tree");

    std::string a1, a2, a3;
    bool as_sequent = false, no_cut = false;
    std::string linking;

    auto* parse = app.add_subcommand("parse", "print the canonical form");
    parse->add_option("input", a1)->required();
    parse->add_flag("--sequent", as_sequent);
    auto* graph = app.add_subcommand("graph", "relation digraph of a formula or sequent");
    graph->add_option("input", a1)->required();
    graph->add_flag("--sequent", as_sequent);
    auto* dico = app.add_subcommand("dicograph-check", "recognize a labeled digraph given as JSON");
    dico->add_option("file", a1)->required();
    auto* prenet = app.add_subcommand("prenet", "RB-digraph of a sequent and a linking");
    prenet->add_option("sequent", a1)->required();
    prenet->add_option("--linking", linking, "partner of each atom occurrence, comma separated");
    auto* netcheck = app.add_subcommand("net-check", "correctness of an RB-digraph given as JSON");
    netcheck->add_option("file", a1)->required();
    auto* prove_cmd = app.add_subcommand("prove", "deep-inference proof search");
    prove_cmd->add_option("formula", a1)->required();
    auto* check_cmd = app.add_subcommand("check", "check a derivation certificate");
    check_cmd->add_option("file", a1)->required();
    auto* pprove = app.add_subcommand("pomset-prove", "provability through proof nets");
    pprove->add_option("sequent", a1)->required();
    auto* derive_cmd = app.add_subcommand("derive", "derivation from one formula to another");
    derive_cmd->add_option("from", a1)->required();
    derive_cmd->add_option("to", a2)->required();

    auto* reduce = app.add_subcommand("reduce", "complexity reductions");
    reduce->require_subcommand(1);
    auto* sat2rb = reduce->add_subcommand("sat2rb", "CNF to RB-digraph");
    auto* rb2seq = reduce->add_subcommand("rb2seq", "RB-digraph to sequent");
    auto* sat2seq = reduce->add_subcommand("sat2seq", "CNF to sequent");
    auto* qbf2seq = reduce->add_subcommand("qbf2seq", "forall-exists CNF to sequent");
    for (auto* s : {sat2rb, rb2seq, sat2seq, qbf2seq}) s->add_option("file", a1)->required();

    auto* oracle = app.add_subcommand("oracle", "brute-force oracles");
    oracle->require_subcommand(1);
    auto* osat = oracle->add_subcommand("sat", "satisfiability");
    auto* oqbf = oracle->add_subcommand("qbf", "forall-exists truth");
    auto* ocyc = oracle->add_subcommand("aecycle", "alternating elementary cycle");
    for (auto* s : {osat, oqbf, ocyc}) s->add_option("file", a1)->required();

    auto* seqc = app.add_subcommand("sequent", "sequent calculi");
    seqc->require_subcommand(1);
    auto* scheck = seqc->add_subcommand("check", "check a proof in Retore's calculus");
    scheck->add_option("file", a1)->required();
    scheck->add_flag("--no-cut", no_cut);
    auto* ssearch = seqc->add_subcommand("search", "cut-free proof search");
    ssearch->add_option("sequent", a1)->required();
    auto* strans = seqc->add_subcommand("translate", "BV certificate to a proof with cuts");
    strans->add_option("file", a1)->required();
    auto* sslav = seqc->add_subcommand("slavnov-check", "check a Slavnov pre-proof");
    sslav->add_option("file", a1)->required();

    auto* tiu = app.add_subcommand("tiu", "refined Tiu formula R_n");
    int tiu_n = 0;
    tiu->add_option("n", tiu_n)->required();
    auto* counter = app.add_subcommand("counterexample", "pomset-provable formula without a BV proof");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    Runner r(in, out, o);
    try {
        if (*parse) {
            if (as_sequent) {
                Sequent s = r.sequent(a1);
                r.emit({{"sequent", print(s)}, {"flat", is_flat(s)}}, print(s));
            } else {
                Formula f = r.formula(a1);
                r.emit({{"formula", print(f)}, {"size", size(f)}, {"balanced", is_balanced(f)}}, print(f));
            }
            return 0;
        }
        if (*graph) {
            LabeledDigraph g = as_sequent ? tograph(r.sequent(a1)) : tograph(r.formula(a1));
            r.dot(to_dot(g));
            r.out_ << to_json(g) << "\n";
            return 0;
        }
        if (*dico) {
            LabeledDigraph g = labeled_from_json(r.file(a1));
            DicographCheck c = check_dicograph(g.g);
            json j = {{"dicograph", c.ok}};
            std::string plain;
            if (c.ok) {
                bool atoms = true;
                for (auto& l : g.labels) {
                    try {
                        atoms = atoms && is_atom(parse_formula(l));
                    } catch (const ParseError&) {
                        atoms = false;
                    }
                }
                plain = "dicograph";
                if (atoms && g.g.size() > 0) {
                    j["formula"] = print(graph_to_formula(g));
                    plain += ": " + print(graph_to_formula(g));
                }
            } else {
                j["violation"] = c.violation;
                j["witness"] = c.witness;
                plain = "not a dicograph: " + c.violation;
            }
            r.emit(j, plain);
            return c.ok ? 0 : 1;
        }
        if (*prenet) {
            Sequent s = r.sequent(a1);
            Linking l;
            if (!linking.empty()) l = parse_linking(linking);
            else {
                auto all = enumerate_linkings(s);
                if (all.empty()) throw InputError("the sequent has no linking");
                l = all[0];
            }
            RBDigraph g = r.mode() == NetMode::Cographic ? cographic_prenet(s, l) : tree_prenet(s, l).g;
            r.dot(to_dot(g));
            r.out_ << to_json(g) << "\n";
            return 0;
        }
        if (*netcheck) {
            RBDigraph g = rb_from_json(r.file(a1));
            Correctness c = is_correct(g, r.mode(), r.budget());
            json j = {{"correct", c.correct}};
            std::string plain = c.correct ? "correct" : "incorrect";
            if (c.witness) {
                j["cycle"] = cycle_json(g, *c.witness);
                plain += ": " + cycle_str(g, *c.witness);
            }
            r.emit(j, plain);
            return c.correct ? 0 : 1;
        }
        if (*prove_cmd) {
            ProveOptions po;
            po.budget = r.budget();
            auto d = prove(r.formula(a1), r.system(false), po);
            json j = {{"provable", d.has_value()}};
            if (d) {
                j["certificate"] = print_certificate(*d);
                j["steps"] = d->length();
            }
            r.emit(j, d ? print_certificate(*d) : "unprovable");
            return d ? 0 : 1;
        }
        if (*check_cmd) {
            Derivation d = parse_certificate(r.file(a1));
            CheckResult c = check_derivation(d, r.system(false));
            bool proof = c.ok && is_proof(d);
            json j = {{"valid", c.ok}, {"proof", proof}, {"conclusion", print(d.conclusion())}};
            if (!c.ok) j["step"] = c.step, j["reason"] = c.reason;
            r.emit(j, c.ok ? (proof ? "valid proof of " : "valid derivation of ") + print(d.conclusion())
                           : "invalid at step " + std::to_string(c.step) + ": " + c.reason);
            return c.ok ? 0 : 1;
        }
        if (*pprove) {
            Sequent s = r.sequent(a1);
            PomsetResult p = pomset_provable(s, r.budget());
            json j = {{"provable", p.provable}, {"linkings_tried", p.linkings_tried}};
            if (p.provable) j["certificate"] = json::parse(p.certificate);
            r.emit(j, p.provable ? "provable\n" + p.certificate : "unprovable");
            return p.provable ? 0 : 1;
        }
        if (*derive_cmd) {
            auto d = derive(r.formula(a1), r.formula(a2), r.system(true), r.budget());
            json j = {{"derivable", d.has_value()}};
            if (d) j["certificate"] = print_certificate(*d);
            r.emit(j, d ? print_certificate(*d) : "no derivation");
            return d ? 0 : 1;
        }
        if (*sat2rb || *rb2seq || *sat2seq || *qbf2seq) {
            if (*rb2seq) {
                Sequent s = proofification(rb_from_json(r.file(a1)));
                r.emit({{"sequent", print(s)}}, print(s));
            } else if (*sat2rb) {
                RBDigraph g = sat_to_rb(r.cnf(a1));
                r.dot(to_dot(g));
                r.out_ << to_json(g) << "\n";
            } else {
                CnfInstance f = r.cnf(a1);
                Sequent s = *sat2seq ? proofification(sat_to_rb(f)) : qbf_to_sequent(f);
                r.emit({{"sequent", print(s)}}, print(s));
            }
            return 0;
        }
        if (*osat || *oqbf) {
            CnfInstance f = r.cnf(a1);
            bool v = *osat ? brute_sat(f) : brute_qbf(f);
            const char* word = *osat ? (v ? "satisfiable" : "unsatisfiable") : (v ? "true" : "false");
            r.emit({{"result", v}}, word);
            return v ? 0 : 1;
        }
        if (*ocyc) {
            RBDigraph g = rb_from_json(r.file(a1));
            auto c = find_ae_cycle(g, r.budget());
            json j = {{"cycle", c.has_value()}};
            if (c) j["witness"] = cycle_json(g, *c);
            r.emit(j, c ? cycle_str(g, *c) : "no alternating elementary cycle");
            return c ? 0 : 1;
        }
        if (*scheck) {
            SequentProof p = parse_proof(r.file(a1));
            SequentCheck c = check_retore(p, !no_cut);
            json j = {{"valid", c.ok}, {"conclusion", print(p.conclusion)}, {"cuts", count_rule(p, SequentRule::Cut)}};
            std::string plain = "valid proof of " + print(p.conclusion);
            if (!c.ok) {
                j["path"] = c.path;
                j["reason"] = c.reason;
                std::string at;
                for (int k : c.path) at += "/" + std::to_string(k);
                plain = "invalid at node " + (at.empty() ? "/" : at) + ": " + c.reason;
            }
            r.emit(j, plain);
            return c.ok ? 0 : 1;
        }
        if (*ssearch) {
            auto p = search_cutfree_retore(r.sequent(a1), r.budget());
            json j = {{"provable", p.has_value()}};
            if (p) j["proof"] = print_proof(*p);
            r.emit(j, p ? print_proof(*p) : "no cut-free proof");
            return p ? 0 : 1;
        }
        if (*strans) {
            Derivation d = parse_certificate(r.file(a1));
            if (!check_derivation(d, System::BVu).ok && check_derivation(d, System::BV).ok) d = bv_to_bvu(d);
            SequentProof p = translate_bvu_proof(d);
            r.emit({{"proof", print_proof(p)}, {"cuts", count_rule(p, SequentRule::Cut)}}, print_proof(p));
            return 0;
        }
        if (*sslav) {
            SequentProof p = parse_proof(r.file(a1));
            SequentCheck c = check_slavnov(p);
            json j = {{"accepted", c.ok}};
            if (!c.ok) j["path"] = c.path, j["reason"] = c.reason;
            r.emit(j, c.ok ? "accepted" : "rejected: " + c.reason);
            return c.ok ? 0 : 1;
        }
        if (*tiu) {
            Formula f = tiu_formula(tiu_n);
            r.emit({{"formula", print(f)}, {"size", size(f)}}, print(f));
            return 0;
        }
        if (*counter) {
            Formula q = parse_formula(kCounterexample);
            PomsetResult p = pomset_provable(formula_to_sequent(q), r.budget());
            ProveOptions po;
            po.budget = r.budget();
            auto d = prove(q, System::BV, po);
            bool separated = p.provable && !d;
            std::string plain = std::string("pomset: ") + (p.provable ? "provable" : "unprovable") +
                                "; BV: " + (d ? "provable" : "unprovable");
            r.emit({{"formula", print(q)}, {"pomset_provable", p.provable}, {"bv_provable", d.has_value()}},
                   plain);
            return separated ? 0 : 1;
        }
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded\n";
        return 3;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "bad JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << app.help();
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace pomset
