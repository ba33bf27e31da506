#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slam/error.hpp"
#include "slam/fixtures.hpp"
#include "slam/gadget.hpp"
#include "slam/homsolver.hpp"

using namespace slam;

namespace {

const signature digraph_sig{{"E", 2}};

conjunctive_query random_query(const signature& source, int num_free, std::mt19937_64& rng) {
    conjunctive_query q;
    q.sig = source;
    q.num_free = num_free;
    const int bound = static_cast<int>(rng() % 3);
    for (int i = 0; i < num_free + bound; ++i) q.vars.push_back("v" + std::to_string(i));
    const int nv = num_free + bound;
    const int atoms = static_cast<int>(rng() % 4);
    for (int a = 0; a < atoms; ++a) {
        std::size_t sym = rng() % source.size();
        query_atom at{sym, {}};
        for (int i = 0; i < source[sym].arity; ++i) at.args.push_back(static_cast<int>(rng() % nv));
        q.atoms.push_back(std::move(at));
    }
    if (rng() % 4 == 0) q.equalities.push_back({static_cast<int>(rng() % nv), static_cast<int>(rng() % nv)});
    return q;
}

pp_power_spec random_spec(std::mt19937_64& rng) {
    pp_power_spec s;
    s.d = 1 + static_cast<int>(rng() % 2);
    s.source = rng() % 2 ? signature{{"E", 2}} : signature{{"E", 2}, {"U", 1}};
    s.target = rng() % 2 ? signature{{"R", 2}} : signature{{"R", 2}, {"S", 1}};
    for (std::size_t r = 0; r < s.target.size(); ++r)
        s.queries.push_back(random_query(s.source, s.d * s.target[r].arity, rng));
    return s;
}

} // namespace

TEST(SpecText, ParseAndRender) {
    auto spec = parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := exists z . E(x,z), E(z,y)\n");
    EXPECT_EQ(spec.d, 1);
    EXPECT_EQ(spec.source, digraph_sig);
    EXPECT_EQ(spec.target, (signature{{"R", 2}}));
    ASSERT_EQ(spec.queries.size(), 1u);
    EXPECT_EQ(spec.queries[0].num_free, 2);
    EXPECT_EQ(spec.queries[0].num_bound(), 1);
    auto again = parse_pp_power_spec(render_pp_power_spec(spec));
    EXPECT_EQ(render_pp_power_spec(again), render_pp_power_spec(spec));

    auto semi = parse_pp_power_spec("ppower d=2 from E/2; rel T(x1,x2) := true # comment");
    EXPECT_EQ(semi.d, 2);
    EXPECT_TRUE(semi.queries[0].atoms.empty());
}

TEST(SpecText, Errors) {
    EXPECT_THROW(parse_pp_power_spec(""), parse_error);
    EXPECT_THROW(parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := E(x,w)\n"), error);
    EXPECT_THROW(parse_pp_power_spec("ppower d=2 from E/2\nrel R(x,y,z) := E(x,y)\n"), error);
    EXPECT_THROW(parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := F(x,y)\n"), error);
}

TEST(PpPower, IdentitySpecGivesTheTemplate) {
    auto spec = parse_pp_power_spec("ppower d=1 from E/2\nrel E(x,y) := E(x,y)\n");
    for (const auto& b : {fixtures::path(3), fixtures::directed_cycle(3), fixtures::transitive_tournament(3)})
        EXPECT_EQ(pp_power(b, spec), b);
    auto c = fixtures::path(4);
    EXPECT_TRUE(oracle::isomorphic(apply_gadget_reduction(spec, c), c));
}

TEST(PpPower, PathCompositionOnP3) {
    auto spec = parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := exists z . E(x,z), E(z,y)\n");
    auto p = pp_power(fixtures::path(3), spec);
    EXPECT_EQ(p.size(), 3);
    ASSERT_EQ(p.rel(0).size(), 1u);
    EXPECT_TRUE(p.rel(0).contains(std::vector<int>{0, 2}));
}

TEST(PpPower, SquareShape) {
    auto spec = parse_pp_power_spec("ppower d=2 from E/2\nrel R(x1,x2,y1,y2) := E(x1,y1), E(x2,y2)\n");
    auto b = fixtures::path(3);
    auto p = pp_power(b, spec);
    EXPECT_EQ(p.size(), 9);
    // edges of the categorical square: (a,b)->(c,d) iff a->c and b->d
    EXPECT_EQ(p.rel(0).size(), 4u);
    EXPECT_TRUE(p.rel(0).contains(std::vector<int>{0 * 3 + 1, 1 * 3 + 2}));
}

TEST(PpPower, DomainCap) {
    auto spec = parse_pp_power_spec("ppower d=2 from E/2\nrel R(x1,x2,y1,y2) := true\n");
    EXPECT_THROW(pp_power(fixtures::path(5), spec, 10), cap_exceeded);
    EXPECT_THROW(pp_power(fixtures::st_con(), spec), signature_mismatch);
}

TEST(Gadget, EqualityMergesElements) {
    auto spec = parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := x=y\n");
    structure c(signature{{"R", 2}}, 3);
    c.add_tuple(0, {0, 1});
    auto g = apply_gadget_reduction(spec, c);
    EXPECT_EQ(g.size(), 2);
    EXPECT_TRUE(g.rel(0).empty());
    EXPECT_THROW(apply_gadget_reduction(spec, fixtures::path(2)), signature_mismatch);
}

TEST(Gadget, ExistentialsAreFreshPerConstraint) {
    auto spec = parse_pp_power_spec("ppower d=1 from E/2\nrel R(x,y) := exists z . E(x,z), E(z,y)\n");
    structure c(signature{{"R", 2}}, 3);
    c.add_tuple(0, {0, 1});
    c.add_tuple(0, {1, 2});
    auto g = apply_gadget_reduction(spec, c);
    EXPECT_EQ(g.size(), 5);
    EXPECT_TRUE(oracle::isomorphic(g, fixtures::path(5)));
}

TEST(Gadget, ContractOnRandomTriples) {
    std::mt19937_64 rng(41);
    int failures = 0, yes = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto spec = random_spec(rng);
        auto b = oracle::random_structure(spec.source, 1 + static_cast<int>(rng() % 3), 0.4, rng);
        auto c = oracle::random_structure(spec.target, 1 + static_cast<int>(rng() % 3), 0.3, rng);
        auto power = pp_power(b, spec);
        auto reduced = apply_gadget_reduction(spec, c);
        const bool left = oracle::hom_exists(c, power);
        const bool right = find_homomorphism(reduced, b).has_value();
        if (reduced.size() <= 9) EXPECT_EQ(right, oracle::hom_exists(reduced, b));
        yes += left;
        if (left != right) {
            ++failures;
            ADD_FAILURE() << render_pp_power_spec(spec) << print_structure(b) << print_structure(c);
        }

        std::size_t bound = static_cast<std::size_t>(spec.d) * c.size();
        for (std::size_t r = 0; r < spec.target.size(); ++r)
            bound += c.rel(r).size() * static_cast<std::size_t>(spec.queries[r].num_bound());
        EXPECT_LE(static_cast<std::size_t>(reduced.size()), bound);
    }
    EXPECT_EQ(failures, 0);
    EXPECT_GT(yes, 100);
    EXPECT_LT(yes, 900);
}
