#include <cctype>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slam/classify.hpp"
#include "slam/cli.hpp"
#include "slam/datalog.hpp"
#include "slam/error.hpp"
#include "slam/fixtures.hpp"
#include "slam/gadget.hpp"
#include "slam/homsolver.hpp"
#include "slam/parallel.hpp"
#include "slam/polymorph.hpp"

namespace slam {

namespace {

using ojson = nlohmann::ordered_json;

struct global_options {
    std::size_t cap_dense = default_dense_cap;
    std::vector<int> max_kn;
    bool json = false;
    int jobs = 0;

    classify_caps caps() const {
        classify_caps c;
        c.dense = cap_dense;
        if (max_kn.size() == 2) {
            c.max_k = max_kn[0];
            c.max_n = max_kn[1];
        }
        return c;
    }
};

std::optional<structure> fixture_by_name(const std::string& name) {
    auto numbered = [&](const std::string& prefix) -> std::optional<int> {
        if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
        int v = 0;
        for (std::size_t i = prefix.size(); i < name.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(name[i])) || v > 1000) return std::nullopt;
            v = v * 10 + (name[i] - '0');
        }
        return v;
    };
    if (name == "D2") return fixtures::st_con();
    if (name == "HornSat") return fixtures::hornsat();
    if (name == "WeakRules") return fixtures::weak_rules_template();
    if (name == "WeakRulesInstance") return fixtures::weak_rules_instance();
    if (name == "Caterpillar") return fixtures::caterpillar_example();
    if (name == "NonCaterpillar") return fixtures::non_caterpillar_example();
    if (name == "UnfoldTree") return fixtures::unfolding_tree();
    if (name == "UnfoldTreeUnfolded") return fixtures::unfolding_tree_unfolded();
    if (auto n = numbered("P"); n && *n >= 1) return fixtures::path(*n);
    if (auto n = numbered("T"); n && *n >= 1) return fixtures::transitive_tournament(*n);
    if (auto n = numbered("C"); n && *n >= 1) return fixtures::directed_cycle(*n);
    if (auto n = numbered("B"); n && *n >= 1 && *n <= 16) return fixtures::b_n(*n);
    if (auto n = numbered("F"); n && *n >= 1) return fixtures::f_n(*n);
    return std::nullopt;
}

std::string map_text(const homomorphism& h) {
    std::string s;
    for (std::size_t i = 0; i < h.size(); ++i) s += (i ? " " : "") + std::to_string(i) + "->" + std::to_string(h[i]);
    return s;
}

program read_program(const std::string& path) { return parse_program(read_text_file(path)); }

void print_eval(std::ostream& out, const evaluation& ev, bool json) {
    if (json) {
        ojson j;
        j["facts"] = ojson::array();
        for (const auto& f : ev.facts) j["facts"].push_back(render_fact(f));
        j["goal"] = ev.goal;
        j["trace"] = ev.trace ? ojson::parse(derivation_json(*ev.trace)) : ojson(nullptr);
        out << j.dump(2) << "\n";
        return;
    }
    for (const auto& f : ev.facts) out << render_fact(f) << "\n";
    out << "goal: " << (ev.goal ? "derived" : "not derived") << "\n";
    if (ev.trace) {
        out << "trace:\n";
        for (const auto& s : ev.trace->steps) {
            out << "  " << render_fact(s.fact) << "  by #" << s.rule_id << " " << render_rule(s.used) << " [";
            for (std::size_t i = 0; i < s.bindings.size(); ++i)
                out << (i ? ", " : "") << s.bindings[i].first << "=" << s.bindings[i].second;
            out << "]\n";
        }
    }
}

void print_report(std::ostream& out, const verification_report& rep, const std::string& what) {
    out << what << ": " << (rep.ok() ? "holds" : "fails") << " (" << rep.checked << " instances checked, "
        << rep.counterexamples.size() << " counterexamples)\n";
    for (std::size_t i = 0; i < rep.counterexamples.size() && i < 5; ++i) out << print_structure(rep.counterexamples[i]);
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decide and solve CSPs with symmetric linear arc monadic Datalog"};
    app.require_subcommand(1);
    app.fallthrough();
    global_options g;
    app.add_option("--cap-dense", g.cap_dense, "Largest dense indicator domain")->capture_default_str();
    app.add_option("--max-kn", g.max_kn, "Sweep bound for absorptive checks: k n")->expected(2);
    app.add_flag("--json", g.json, "Machine readable output");
    app.add_option("--jobs", g.jobs, "Worker threads for parallel kernels (0 = default)");

    std::string b_path, a_path, engine = "search", fragment_name, prog_path, spec_path, t_path;
    std::vector<std::string> obstruction_paths;
    int ua = 0, ub = 0, size = 4;
    std::size_t samples = 0;
    std::uint64_t seed = 1;
    bool timing = false;

    auto* classify_cmd = app.add_subcommand("classify", "Slam, caterpillar and tree duality verdicts");
    classify_cmd->add_option("template", b_path)->required();
    classify_cmd->add_flag("--timing", timing, "Include per-phase timings in the JSON report");

    auto* solve_cmd = app.add_subcommand("solve", "Decide whether an instance maps to the template (exit 0/1)");
    solve_cmd->add_option("template", b_path)->required();
    solve_cmd->add_option("instance", a_path)->required();
    solve_cmd->add_option("--engine", engine)->check(CLI::IsMember({"slam", "ac", "search"}))->capture_default_str();

    auto* hom_cmd = app.add_subcommand("hom", "Find a homomorphism A -> B");
    hom_cmd->add_option("source", a_path)->required();
    hom_cmd->add_option("target", b_path)->required();

    auto* core_cmd = app.add_subcommand("core", "Core of a structure");
    core_cmd->add_option("structure", b_path)->required();

    auto* canon_cmd = app.add_subcommand("canon", "Canonical monadic arc program");
    canon_cmd->add_option("template", b_path)->required();
    canon_cmd->add_option("--fragment", fragment_name)->required()->check(CLI::IsMember({"am", "lam", "slam"}));

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a program on an instance");
    eval_cmd->add_option("program", prog_path)->required();
    eval_cmd->add_option("instance", a_path)->required();

    auto* unfold_cmd = app.add_subcommand("unfold", "(a,b)-unfolding of a tree");
    unfold_cmd->add_option("tree", t_path)->required();
    unfold_cmd->add_option("a", ua)->required();
    unfold_cmd->add_option("b", ub)->required();

    auto* gadget_cmd = app.add_subcommand("gadget", "pp-powers and gadget reductions");
    gadget_cmd->require_subcommand(1);
    auto* gadget_apply = gadget_cmd->add_subcommand("apply", "Apply the reduction to an instance");
    gadget_apply->add_option("spec", spec_path)->required();
    gadget_apply->add_option("instance", a_path)->required();
    auto* gadget_power = gadget_cmd->add_subcommand("power", "Build the pp-power of a template");
    gadget_power->add_option("spec", spec_path)->required();
    gadget_power->add_option("template", b_path)->required();

    std::string fixture_name;
    auto* fixture_cmd = app.add_subcommand("fixture", "Print a built-in structure (P<n>, T<n>, C<n>, B<n>, F<n>, D2, HornSat, "
                                                      "WeakRules, WeakRulesInstance, Caterpillar, NonCaterpillar, UnfoldTree, UnfoldTreeUnfolded)");
    fixture_cmd->add_option("name", fixture_name)->required();

    auto* verify_cmd = app.add_subcommand("verify", "Exhaustive verification over small instances");
    verify_cmd->require_subcommand(1);
    auto* verify_duality = verify_cmd->add_subcommand("duality", "Check a duality pair");
    verify_duality->add_option("template", b_path)->required();
    verify_duality->add_option("obstructions", obstruction_paths)->required();
    verify_duality->add_option("--size", size)->capture_default_str();
    auto* verify_program = verify_cmd->add_subcommand("program", "Check that a program solves CSP(B)");
    verify_program->add_option("program", prog_path)->required();
    verify_program->add_option("template", b_path)->required();
    verify_program->add_option("--size", size)->capture_default_str();
    verify_program->add_option("--samples", samples)->capture_default_str();
    verify_program->add_option("--seed", seed)->capture_default_str();

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (g.max_kn.size() == 2 && (g.max_kn[0] < 1 || g.max_kn[1] < 1))
            throw precondition_error("--max-kn values must be positive");
        if (g.jobs > 0) set_jobs(g.jobs);

        if (*classify_cmd) {
            auto b = read_structure_file(b_path);
            auto r = classify(b, g.caps());
            if (g.json || timing) {
                out << report_json(r, timing) << "\n";
            } else {
                out << "structure " << (r.structure_name.empty() ? "unnamed" : r.structure_name) << " (" << r.structure_hash
                    << ")\n";
                out << "m = " << r.m << ", k0 = " << r.k0 << ", n0 = " << r.n0 << "\n";
                out << "tree_duality: " << to_string(r.tree_duality.value) << " - " << r.tree_duality.note << "\n";
                out << "quasi_maltsev: " << to_string(r.quasi_maltsev.value) << " - " << r.quasi_maltsev.note << "\n";
                out << "caterpillar_lam: " << to_string(r.caterpillar_lam.value) << " - " << r.caterpillar_lam.note << "\n";
                out << "slam: " << to_string(r.slam.value) << " - " << r.slam.note << "\n";
            }
            return 0;
        }
        if (*solve_cmd) {
            auto b = read_structure_file(b_path);
            auto a = read_structure_file(a_path);
            if (!(a.sig() == b.sig())) throw signature_mismatch("instance and template signatures differ");
            bool sat = false;
            if (engine == "search") {
                sat = find_homomorphism(a, b).has_value();
            } else if (engine == "ac") {
                if (arc_consistency(a, b)) {
                    if (!totally_symmetric_check(b).holds) {
                        out << "INCONCLUSIVE\n";
                        err << "arc consistency does not decide CSP of this template\n";
                        return 2;
                    }
                    sat = true;
                }
            } else {
                auto p = emit_slam(b, g.caps());
                sat = !evaluate(p, a, true).goal;
            }
            out << (sat ? "SAT" : "UNSAT") << "\n";
            return sat ? 0 : 1;
        }
        if (*hom_cmd) {
            auto a = read_structure_file(a_path);
            auto b = read_structure_file(b_path);
            auto h = find_homomorphism(a, b);
            out << (h ? map_text(*h) : std::string("NONE")) << "\n";
            return h ? 0 : 1;
        }
        if (*core_cmd) {
            auto b = read_structure_file(b_path);
            auto c = core_of(b);
            if (g.json) {
                ojson j;
                j["core"] = print_structure(c.core);
                j["retraction"] = c.retraction;
                out << j.dump(2) << "\n";
            } else {
                out << print_structure(c.core);
                out << "# retraction " << map_text(c.retraction) << "\n";
            }
            return 0;
        }
        if (*canon_cmd) {
            auto b = read_structure_file(b_path);
            fragment f = fragment_name == "am" ? fragment::am : fragment_name == "lam" ? fragment::lam : fragment::slam;
            out << render_program(canonical_program(b, f));
            return 0;
        }
        if (*eval_cmd) {
            auto p = read_program(prog_path);
            auto a = read_structure_file(a_path);
            print_eval(out, evaluate(p, a), g.json);
            return 0;
        }
        if (*unfold_cmd) {
            auto t = read_structure_file(t_path);
            auto u = unfold(t, ua, ub);
            out << print_structure(u.result);
            out << "# a=" << u.a << " a'=" << u.a_prime << " b=" << u.b << " b'=" << u.b_prime << "\n";
            out << "# fold " << map_text(u.fold) << "\n";
            return 0;
        }
        if (*gadget_apply) {
            auto spec = parse_pp_power_spec(read_text_file(spec_path));
            out << print_structure(apply_gadget_reduction(spec, read_structure_file(a_path)));
            return 0;
        }
        if (*gadget_power) {
            auto spec = parse_pp_power_spec(read_text_file(spec_path));
            out << print_structure(pp_power(read_structure_file(b_path), spec, g.cap_dense));
            return 0;
        }
        if (*fixture_cmd) {
            auto s = fixture_by_name(fixture_name);
            if (!s) throw precondition_error("unknown fixture '" + fixture_name + "'");
            out << print_structure(*s);
            return 0;
        }
        if (*verify_duality) {
            auto b = read_structure_file(b_path);
            std::vector<structure> obs;
            for (const auto& p : obstruction_paths) obs.push_back(read_structure_file(p));
            auto rep = verify_duality_pair(obs, b, size);
            print_report(out, rep, "duality pair");
            return rep.ok() ? 0 : 1;
        }
        if (*verify_program) {
            auto p = read_program(prog_path);
            auto b = read_structure_file(b_path);
            auto rep = verify_program_solves(p, b, size, samples, seed);
            print_report(out, rep, "program solves CSP");
            return rep.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no command\n";
    return 2;
}

} // namespace slam
