// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slam/classify.hpp"
#include "slam/datalog.hpp"
#include "slam/error.hpp"
#include "slam/fixtures.hpp"
#include "slam/gadget.hpp"
#include "slam/homsolver.hpp"
#include "slam/polymorph.hpp"

using namespace slam;

namespace {

using clock_type = std::chrono::steady_clock;

constexpr double limit_verdicts_s = 60;
constexpr double limit_exhaustive_s = 60;
constexpr double limit_indicator_s = 120;
constexpr double limit_dense_s = 120;
constexpr int soundness_samples = 10000;
constexpr int unfold_samples = 20;
constexpr int gadget_samples = 1000;

const signature digraph_sig{{"E", 2}};

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<outcome()>& check) {
    auto t0 = clock_type::now();
    outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
}

std::vector<structure> digraphs_up_to_4() { return enumerate_instances(digraph_sig, 4); }

structure random_satisfiable(const structure& b, int n, std::mt19937_64& rng) {
    structure a(b.sig(), n);
    std::vector<int> h(n);
    for (int& x : h) x = static_cast<int>(rng() % b.size());
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        const int ar = b.sig()[r].arity;
        oracle::for_each_map(ar, n, [&](const std::vector<int>& t) {
            std::vector<int> img(ar);
            for (int i = 0; i < ar; ++i) img[i] = h[t[i]];
            if (b.rel(r).contains(img) && rng() % 3 == 0) a.add_tuple(r, t);
            return true;
        });
    }
    return a;
}

std::vector<structure> two_element_templates() {
    std::vector<structure> out;
    for (int code = 0; code < 64; ++code) {
        structure s(signature{{"E", 2}, {"U", 1}}, 2);
        for (int b = 0; b < 4; ++b)
            if ((code >> b) & 1) s.add_tuple(0, {b / 2, b % 2});
        for (int b = 0; b < 2; ++b)
            if ((code >> (4 + b)) & 1) s.add_tuple(1, {b});
        out.push_back(std::move(s));
    }
    return out;
}

std::string verdict_row(const classification_report& r) {
    return "tree=" + to_string(r.tree_duality.value) + " lam=" + to_string(r.caterpillar_lam.value) +
           " slam=" + to_string(r.slam.value);
}

outcome criterion1() {
    using v = verdict_value;
    struct row {
        structure b;
        std::optional<v> tree, lam, slam;
    };
    std::vector<row> rows{{fixtures::path(2), {}, {}, v::yes},
                          {fixtures::path(3), {}, {}, v::yes},
                          {fixtures::transitive_tournament(3), {}, v::yes, v::no},
                          {fixtures::b_n(2), {}, v::yes, v::no},
                          {fixtures::st_con(), {}, v::yes, v::no},
                          {fixtures::hornsat(), v::yes, v::no, {}},
                          {fixtures::directed_cycle(3), v::no, {}, {}}};
    auto t0 = clock_type::now();
    std::string bad;
    for (const auto& r : rows) {
        auto rep = classify(r.b);
        bool ok = (!r.tree || rep.tree_duality.value == *r.tree) && (!r.lam || rep.caterpillar_lam.value == *r.lam) &&
                  (!r.slam || rep.slam.value == *r.slam);
        if (!ok) bad += " " + r.b.name() + "[" + verdict_row(rep) + "]";
    }
    double t = seconds_since(t0);
    return {bad.empty() && t < limit_verdicts_s, bad.empty() ? "7/7 verdicts match" : "mismatch:" + bad};
}

outcome criterion2() {
    auto graphs = digraphs_up_to_4();
    auto t0 = clock_type::now();
    std::size_t disagreements = 0;
    for (const auto& b : {fixtures::path(2), fixtures::path(3)}) {
        auto p = emit_slam(b);
        for (const auto& a : graphs)
            if (evaluate(p, a, true).goal == oracle::hom_exists(a, b)) ++disagreements;
    }
    double t = seconds_since(t0);
    return {disagreements == 0 && t < limit_exhaustive_s,
            std::to_string(graphs.size()) + " instances per template (loops included), " +
                std::to_string(disagreements) + " disagreements"};
}

outcome criterion3() {
    std::mt19937_64 rng(2024);
    std::size_t derived = 0, runs = 0;
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::transitive_tournament(3), fixtures::b_n(2),
                          fixtures::st_con(), fixtures::hornsat(), fixtures::directed_cycle(3)}) {
        std::vector<program> progs{canonical_program(b, fragment::lam), canonical_program(b, fragment::slam)};
        if (b.size() <= 3) progs.push_back(canonical_program(b, fragment::am));
        for (int i = 0; i < soundness_samples; ++i) {
            auto a = random_satisfiable(b, 1 + i % 6, rng);
            for (const auto& p : progs) {
                ++runs;
                derived += evaluate(p, a, true).goal;
            }
        }
    }
    return {derived == 0, std::to_string(runs) + " program runs, " + std::to_string(derived) + " goal derivations"};
}

outcome criterion4() {
    auto graphs = digraphs_up_to_4();
    std::size_t differ = 0, repaired = 0, failed = 0;
    for (const auto& b : {fixtures::path(2), fixtures::path(3)}) {
        auto lam = canonical_program(b, fragment::lam);
        auto slam = canonical_program(b, fragment::slam);
        for (const auto& a : graphs) {
            auto l = evaluate(lam, a);
            if (l.goal != evaluate(slam, a, true).goal) ++differ;
            if (!l.goal) continue;
            try {
                repair_to_symmetric(*l.trace, b, slam);
                ++repaired;
            } catch (const repair_failed&) {
                ++failed;
            }
        }
    }

    auto wb = fixtures::weak_rules_template();
    auto wslam = canonical_program(wb, fragment::slam);
    auto chain = parse_program("@edb E/2 C0/1 C0p/1 C1/1 Ca/1 Cb/1 Cbp/1\n"
                               "P{0}(x) :- C0(x).\n"
                               "P{2}(y) :- E(x,y), P{0}(x).\n"
                               "goal :- Cb(x), P{2}(x).\n");
    auto e = evaluate(chain, fixtures::weak_rules_instance());
    bool weak_ok = false;
    if (e.goal) {
        auto d = repair_to_symmetric(*e.trace, wb, wslam);
        weak_ok = d.steps.size() == 3 && d.steps[0].fact.pred == "P{0_1}" &&
                  render_rule(d.steps[1].used) == "P{2}(y) :- E(x,y), P{0_1}(x).";
    }
    return {differ == 0 && failed == 0 && weak_ok,
            std::to_string(differ) + " LAM/SLAM differences, " + std::to_string(repaired) + " repairs, " +
                std::to_string(failed) + " repair failures, weak-rules Q0={0,0'} " + (weak_ok ? "reproduced" : "missing")};
}

outcome criterion5() {
    auto t0 = clock_type::now();
    std::size_t mismatches = 0, compared = 0;
    for (const auto& b : two_element_templates())
        for (const auto& c : {minor_condition::quasi_maltsev(), minor_condition::quasi_minority(),
                              minor_condition::quasi_majority()}) {
            ++compared;
            if (find_polymorphism_satisfying(b, c).has_value() != brute_force_search(b, c).has_value()) ++mismatches;
        }
    double t = seconds_since(t0);
    return {mismatches == 0 && t < limit_indicator_s,
            std::to_string(compared) + " comparisons, " + std::to_string(mismatches) + " mismatches"};
}

outcome criterion6() {
    auto t0 = clock_type::now();
    auto dense = absorptive_check(fixtures::path(2), 4, 4, absorptive_strategy::dense);
    double t = seconds_since(t0);
    std::size_t mismatches = 0, compared = 0;
    for (const auto& b : {fixtures::path(2), fixtures::b_n(2), fixtures::f_n(2), fixtures::st_con(), fixtures::hornsat(),
                          fixtures::weak_rules_instance()})
        for (auto [k, n] : {std::pair{1, 2}, {2, 2}, {2, 3}}) {
            ++compared;
            if (absorptive_check(b, k, n, absorptive_strategy::dense).holds !=
                absorptive_check(b, k, n, absorptive_strategy::setsystem).holds)
                ++mismatches;
        }
    char buf[160];
    std::snprintf(buf, sizeof buf, "dense (P2,4,4) %s in %.1f s; %zu setsystem comparisons, %zu mismatches",
                  dense.holds ? "yes" : "no", t, compared, mismatches);
    return {dense.holds && t < limit_dense_s && mismatches == 0, buf};
}

outcome criterion7() {
    std::mt19937_64 rng(77);
    std::vector<std::pair<structure, program>> templates;
    for (const auto& b : {fixtures::path(2), fixtures::path(3)}) templates.emplace_back(b, emit_slam(b));
    int done = 0, bad = 0, goal_cases = 0;
    for (int i = 0; done < unfold_samples && i < 10000; ++i) {
        auto t = oracle::random_caterpillar(10, rng);
        auto g = make_incidence_graph(t);
        std::vector<int> inner;
        for (int v = 0; v < t.size(); ++v)
            if (g.adjacency[v].size() >= 2) inner.push_back(v);
        if (inner.size() < 2) continue;
        int a = inner[rng() % inner.size()], b = inner[rng() % inner.size()];
        if (a == b) continue;
        auto u = unfold(t, a, b);
        bool ok = shape_of(u.result).caterpillar && is_homomorphism(u.fold, u.result, t);
        for (const auto& [tmpl, prog] : templates)
            if (evaluate(prog, t, true).goal) {
                ++goal_cases;
                ok = ok && evaluate(prog, u.result, true).goal;
            }
        bad += !ok;
        ++done;
    }
    auto fig = unfold(fixtures::unfolding_tree(), fixtures::unfolding_a, fixtures::unfolding_b);
    bool drawn = oracle::isomorphic(fig.result, fixtures::unfolding_tree_unfolded());
    return {done == unfold_samples && bad == 0 && drawn,
            std::to_string(done) + " caterpillars, " + std::to_string(bad) + " violations, " +
                std::to_string(goal_cases) + " goal cases, drawn example " + (drawn ? "matches" : "differs")};
}

outcome criterion8() {
    std::mt19937_64 rng(88);
    int bad = 0;
    for (int trial = 0; trial < gadget_samples; ++trial) {
        pp_power_spec s;
        s.d = 1 + static_cast<int>(rng() % 2);
        s.source = rng() % 2 ? signature{{"E", 2}} : signature{{"E", 2}, {"U", 1}};
        s.target = rng() % 2 ? signature{{"R", 2}} : signature{{"R", 2}, {"S", 1}};
        for (std::size_t r = 0; r < s.target.size(); ++r) {
            conjunctive_query q;
            q.sig = s.source;
            q.num_free = s.d * s.target[r].arity;
            const int nv = q.num_free + static_cast<int>(rng() % 3);
            for (int i = 0; i < nv; ++i) q.vars.push_back("v" + std::to_string(i));
            const int atoms = static_cast<int>(rng() % 4);
            for (int k = 0; k < atoms; ++k) {
                std::size_t sym = rng() % s.source.size();
                query_atom at{sym, {}};
                for (int i = 0; i < s.source[sym].arity; ++i) at.args.push_back(static_cast<int>(rng() % nv));
                q.atoms.push_back(std::move(at));
            }
            if (rng() % 4 == 0) q.equalities.push_back({static_cast<int>(rng() % nv), static_cast<int>(rng() % nv)});
            s.queries.push_back(std::move(q));
        }
        auto b = oracle::random_structure(s.source, 1 + static_cast<int>(rng() % 3), 0.4, rng);
        auto c = oracle::random_structure(s.target, 1 + static_cast<int>(rng() % 3), 0.3, rng);
        bool left = oracle::hom_exists(c, pp_power(b, s));
        bool right = find_homomorphism(apply_gadget_reduction(s, c), b).has_value();
        bad += left != right;
    }
    return {bad == 0, std::to_string(gadget_samples) + " triples, " + std::to_string(bad) + " failures"};
}

outcome criterion9() {
    auto first = verify_duality_pair({fixtures::path(3)}, fixtures::path(2), 5);
    auto second = verify_duality_pair({fixtures::path(4)}, fixtures::transitive_tournament(3), 4);
    return {first.ok() && second.ok(), "({P3},P2,5): " + std::to_string(first.checked) + " checked, " +
                                           std::to_string(first.counterexamples.size()) + " counterexamples; ({P4},T3,4): " +
                                           std::to_string(second.checked) + " checked, " +
                                           std::to_string(second.counterexamples.size()) + " counterexamples"};
}

outcome criterion10() {
    std::vector<structure> suite{fixtures::path(2),        fixtures::path(3), fixtures::transitive_tournament(3),
                                 fixtures::b_n(2),         fixtures::st_con(), fixtures::hornsat(),
                                 fixtures::directed_cycle(3), fixtures::weak_rules_template()};
    auto run_suite = [&](int jobs) {
        set_jobs(jobs);
        std::string all;
        for (const auto& b : suite) all += report_json(classify(b)) + "\n";
        return all;
    };
    auto one = run_suite(1);
    auto eight = run_suite(8);
    set_jobs(0);
    return {one == eight, std::to_string(suite.size()) + " reports, " + std::to_string(one.size()) + " bytes, " +
                              (one == eight ? "identical" : "different")};
}

} // namespace

int main() {
    report(1, "fixture verdict table", criterion1);
    report(2, "canonical slam solves P2/P3 on all small digraphs", criterion2);
    report(3, "soundness on random satisfiable instances", criterion3);
    report(4, "LAM and SLAM agreement with repair", criterion4);
    report(5, "indicator against brute force on two-element templates", criterion5);
    report(6, "absorptive bound machinery", criterion6);
    report(7, "unfolding properties", criterion7);
    report(8, "gadget contract", criterion8);
    report(9, "duality pairs", criterion9);
    report(10, "determinism across worker counts", criterion10);
    return failures == 0 ? 0 : 1;
}
