#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slam/datalog.hpp"
#include "slam/error.hpp"
#include "slam/fixtures.hpp"
#include "slam/homsolver.hpp"

using namespace slam;

namespace {

const signature digraph_sig{{"E", 2}};

// A random instance that maps to b: a random structure pulled back along a random map.
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

std::vector<structure> digraphs_up_to(int max_n) {
    std::vector<structure> out;
    for (int n = 1; n <= max_n; ++n)
        for (int code = 0; code < (1 << (n * n)); ++code) {
            structure s(digraph_sig, n);
            for (int b = 0; b < n * n; ++b)
                if ((code >> b) & 1) s.add_tuple(0, {b / n, b % n});
            out.push_back(std::move(s));
        }
    return out;
}

rule parse_rule(const std::string& text, const std::string& edb = "E/2") {
    return parse_program("@edb " + edb + "\n" + text).rules.at(0);
}

// Checks that d is a derivation of goal in p on instance a.
void expect_valid_derivation(const derivation& d, const program& p, const structure& a) {
    std::set<ground_fact> known;
    for (const auto& step : d.steps) {
        ASSERT_GE(step.rule_id, 0);
        ASSERT_LT(static_cast<std::size_t>(step.rule_id), p.rules.size());
        EXPECT_EQ(p.rules[step.rule_id], step.used);
        std::map<std::string, int> val(step.bindings.begin(), step.bindings.end());
        for (const auto& at : step.used.body) {
            std::vector<int> args;
            for (const auto& v : at.args) args.push_back(val.at(v));
            if (at.kind == predicate_kind::edb)
                EXPECT_TRUE(a.rel(at.pred).contains(args)) << render_rule(step.used);
            else
                EXPECT_TRUE(known.count({at.pred, args})) << render_rule(step.used);
        }
        std::vector<int> head;
        for (const auto& v : step.used.head.args) head.push_back(val.at(v));
        EXPECT_EQ(step.fact, (ground_fact{step.used.head.pred, head}));
        known.insert(step.fact);
    }
    ASSERT_FALSE(d.steps.empty());
    EXPECT_EQ(d.steps.back().fact.pred, goal_name);
}

} // namespace

TEST(SubsetPredicate, Names) {
    EXPECT_EQ(subset_predicate(std::vector<int>{}), "Pempty");
    EXPECT_EQ(subset_predicate(std::vector<int>{0, 2}), "P{0_2}");
    EXPECT_EQ(subset_predicate(0b101, 3), "P{0_2}");
}

TEST(Canonical, FragmentFlags) {
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::transitive_tournament(3)}) {
        auto am = fragment_of(canonical_program(b, fragment::am));
        EXPECT_TRUE(am.monadic && am.arc);
        EXPECT_FALSE(am.linear);
        auto lam = fragment_of(canonical_program(b, fragment::lam));
        EXPECT_TRUE(lam.monadic && lam.arc && lam.linear);
        auto slam = fragment_of(canonical_program(b, fragment::slam));
        EXPECT_TRUE(slam.monadic && slam.arc && slam.linear && slam.symmetric);
    }
}

TEST(Canonical, AllRulesAreValid) {
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::st_con()})
        for (auto f : {fragment::am, fragment::lam, fragment::slam}) {
            auto p = canonical_program(b, f);
            for (const auto& r : p.rules) EXPECT_TRUE(rule_valid(r, b)) << render_rule(r);
        }
}

TEST(Canonical, RenderedProgramParsesBack) {
    auto p = canonical_program(fixtures::path(3), fragment::slam);
    auto back = parse_program(render_program(p));
    EXPECT_EQ(back.rules, p.rules);
    EXPECT_EQ(back.edb, p.edb);
}

TEST(Canonical, EmptyRelationGivesGoalRule) {
    structure b(signature{{"E", 2}, {"U", 1}}, 2);
    b.add_tuple(0, {0, 1});
    auto p = canonical_program(b, fragment::lam);
    auto text = render_program(p);
    EXPECT_NE(text.find("goal :- U(x)."), std::string::npos);
    structure a(b.sig(), 1);
    a.add_tuple(1, {0});
    EXPECT_TRUE(evaluate(p, a).goal);
}

TEST(RuleValid, Examples) {
    auto b = fixtures::path(3);
    EXPECT_TRUE(rule_valid(parse_rule("P{1_2}(y) :- E(x,y)."), b));
    EXPECT_FALSE(rule_valid(parse_rule("P{1}(y) :- E(x,y)."), b));
    EXPECT_TRUE(rule_valid(parse_rule("P{2}(y) :- E(x,y), P{1}(x)."), b));
    EXPECT_TRUE(rule_valid(parse_rule("goal :- E(x,y), P{2}(x)."), b));
    EXPECT_FALSE(rule_valid(parse_rule("goal :- E(x,y), P{1}(x)."), b));
    EXPECT_TRUE(rule_valid(parse_rule("goal :- Pempty(x)."), b));
    EXPECT_TRUE(rule_valid(parse_rule("goal :- E(x,x)."), b));
}

TEST(Canonical, SoundOnSatisfiableInstances) {
    std::mt19937_64 rng(31);
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::transitive_tournament(3),
                          fixtures::directed_cycle(3)}) {
        std::vector<program> progs{canonical_program(b, fragment::am), canonical_program(b, fragment::lam),
                                   canonical_program(b, fragment::slam)};
        for (int i = 0; i < 200; ++i) {
            auto a = random_satisfiable(b, 1 + i % 6, rng);
            for (const auto& p : progs) EXPECT_FALSE(evaluate(p, a, true).goal) << print_structure(a);
        }
    }
}

TEST(Canonical, AmDerivesGoalExactlyWhenArcConsistencyFails) {
    std::mt19937_64 rng(32);
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::transitive_tournament(3),
                          fixtures::directed_cycle(3)}) {
        auto am = canonical_program(b, fragment::am);
        for (int i = 0; i < 200; ++i) {
            auto a = oracle::random_structure(digraph_sig, 1 + i % 5, 0.25, rng);
            EXPECT_EQ(evaluate(am, a, true).goal, !arc_consistency(a, b).has_value()) << print_structure(a);
        }
    }
}

TEST(Canonical, IntroTemplatesLamAndSlamAgreeAndRepairSucceeds) {
    auto graphs = digraphs_up_to(3);
    for (const auto& b : {fixtures::path(2), fixtures::path(3)}) {
        auto lam = canonical_program(b, fragment::lam);
        auto slam = canonical_program(b, fragment::slam);
        for (const auto& a : graphs) {
            auto l = evaluate(lam, a);
            auto s = evaluate(slam, a, true);
            EXPECT_EQ(l.goal, s.goal) << print_structure(a);
            EXPECT_EQ(l.goal, !oracle::hom_exists(a, b));
            if (!l.goal) continue;
            ASSERT_TRUE(l.trace);
            auto repaired = repair_to_symmetric(*l.trace, b, slam);
            expect_valid_derivation(repaired, slam, a);
        }
    }
}

TEST(Repair, WeakRulesExample) {
    auto b = fixtures::weak_rules_template();
    auto a = fixtures::weak_rules_instance();
    auto slam = canonical_program(b, fragment::slam);
    const auto weak = parse_rule("P{2}(y) :- E(x,y), P{0}(x).");
    const auto needed = parse_rule("P{2}(y) :- E(x,y), P{0_1}(x).");
    EXPECT_TRUE(rule_valid(weak, b));
    EXPECT_FALSE(rule_valid(reverse_rule(weak), b));
    EXPECT_FALSE(slam.find_rule(weak));
    EXPECT_TRUE(slam.find_rule(needed));
    EXPECT_TRUE(slam.find_rule(reverse_rule(needed)));

    std::string chain = "@edb E/2 C0/1 C0p/1 C1/1 Ca/1 Cb/1 Cbp/1\n"
                        "P{0}(x) :- C0(x).\n"
                        "P{2}(y) :- E(x,y), P{0}(x).\n"
                        "goal :- Cb(x), P{2}(x).\n";
    auto lam = parse_program(chain);
    for (const auto& r : lam.rules) EXPECT_TRUE(rule_valid(r, b)) << render_rule(r);
    auto e = evaluate(lam, a);
    ASSERT_TRUE(e.goal);
    auto repaired = repair_to_symmetric(*e.trace, b, slam);
    ASSERT_EQ(repaired.steps.size(), 3u);
    EXPECT_EQ(repaired.steps[0].fact.pred, "P{0_1}");
    EXPECT_EQ(render_rule(repaired.steps[1].used), render_rule(needed));
    expect_valid_derivation(repaired, slam, a);
    EXPECT_TRUE(evaluate(slam, a, true).goal);
}

TEST(Repair, RejectsNonGoalDerivation) {
    derivation d;
    EXPECT_THROW(repair_to_symmetric(d, fixtures::path(2)), precondition_error);
}

TEST(Repair, FailsWhereSlamCannotDeriveGoal) {
    auto b = fixtures::transitive_tournament(3);
    auto lam = canonical_program(b, fragment::lam);
    auto slam = canonical_program(b, fragment::slam);
    int gaps = 0;
    auto instances = digraphs_up_to(3);
    instances.push_back(fixtures::path(4));
    instances.push_back(fixtures::path(5));
    for (const auto& a : instances) {
        auto e = evaluate(lam, a);
        if (!e.goal) continue;
        if (evaluate(slam, a, true).goal) continue;
        ++gaps;
        EXPECT_THROW(repair_to_symmetric(*e.trace, b, slam), repair_failed) << print_structure(a);
    }
    EXPECT_GT(gaps, 0);
}

TEST(Canonical, SizeLimits) {
    structure big(digraph_sig, 11);
    EXPECT_THROW(canonical_program(big, fragment::am), error);
    EXPECT_THROW(canonical_program(big, fragment::slam), error);
}
