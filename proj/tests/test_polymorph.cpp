#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slam/error.hpp"
#include "slam/fixtures.hpp"
#include "slam/polymorph.hpp"

using namespace slam;

namespace {

using table3 = std::vector<int>; // ternary table on {0,1}, index 4x + 2y + z

int at(const table3& t, int x, int y, int z) { return t[4 * x + 2 * y + z]; }

bool naive_quasi_maltsev(const table3& t) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (at(t, x, x, y) != at(t, y, x, x) || at(t, y, x, x) != at(t, y, y, y)) return false;
    return true;
}

bool naive_quasi_minority(const table3& t) {
    if (!naive_quasi_maltsev(t)) return false;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (at(t, x, y, x) != at(t, y, y, y)) return false;
    return true;
}

bool naive_quasi_majority(const table3& t) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            int v = at(t, x, x, x);
            if (at(t, x, x, y) != v || at(t, x, y, x) != v || at(t, y, x, x) != v) return false;
        }
    return true;
}

bool naive_preserves(const table3& t, const structure& b) {
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        const auto& rel = b.rel(r);
        const int a = rel.arity();
        for (auto r1 : rel)
            for (auto r2 : rel)
                for (auto r3 : rel) {
                    std::vector<int> img(a);
                    for (int i = 0; i < a; ++i) img[i] = at(t, r1[i], r2[i], r3[i]);
                    if (!rel.contains(img)) return false;
                }
    }
    return true;
}

bool naive_exists(const structure& b, bool (*cond)(const table3&)) {
    for (int code = 0; code < 256; ++code) {
        table3 t(8);
        for (int i = 0; i < 8; ++i) t[i] = (code >> i) & 1;
        if (cond(t) && naive_preserves(t, b)) return true;
    }
    return false;
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

// Classes of the equivalence generated by the pairs, as canonical class ids.
std::vector<int> closure(std::size_t size, const std::vector<std::pair<tuple_code, tuple_code>>& pairs) {
    partition p(size);
    for (auto [a, b] : pairs) p.unite(a, b);
    return p.class_ids();
}

// Literal block-symmetric + absorptive expansion over all tuples.
std::vector<int> literal_absorptive_classes(int domain, int k, int n) {
    const int m = k * n;
    std::size_t size = 1;
    for (int i = 0; i < m; ++i) size *= domain;
    auto blocks_of = [&](std::size_t code) {
        std::vector<int> t(m);
        for (int i = m - 1; i >= 0; --i) {
            t[i] = static_cast<int>(code % domain);
            code /= domain;
        }
        std::vector<std::set<int>> blocks(n);
        for (int i = 0; i < m; ++i) blocks[i / k].insert(t[i]);
        return std::make_pair(t, blocks);
    };
    partition p(size);
    std::map<std::set<std::set<int>>, std::size_t> by_family;
    for (std::size_t c = 0; c < size; ++c) {
        auto [t, blocks] = blocks_of(c);
        std::set<std::set<int>> fam(blocks.begin(), blocks.end());
        auto [it, fresh] = by_family.emplace(fam, c);
        if (!fresh) p.unite(it->second, c);
        if (n >= 2 && std::includes(blocks[0].begin(), blocks[0].end(), blocks[1].begin(), blocks[1].end())) {
            std::vector<int> u = t;
            for (int i = 0; i < k; ++i) u[i] = t[k + i];
            std::size_t uc = 0;
            for (int v : u) uc = uc * domain + v;
            p.unite(c, uc);
        }
    }
    return p.class_ids();
}

} // namespace

TEST(Condition, ParseRenderRoundTrip) {
    for (const char* text : {"cond quasi-maltsev", "cond quasi-minority", "cond quasi-majority", "cond tsym 4",
                             "cond absorptive 2 3"}) {
        auto c = parse_condition(text);
        EXPECT_EQ(render_condition(c), text);
        EXPECT_EQ(parse_condition(render_condition(c)), c);
    }
    auto e = parse_condition("cond explicit m=3 (x,x,y)≈(y,x,x); (y,x,x)~(y,y,y)");
    EXPECT_EQ(e.arity, 3);
    EXPECT_EQ(e.identities.size(), 2u);
    EXPECT_EQ(parse_condition(render_condition(e)), e);
    EXPECT_THROW(parse_condition("cond explicit m=2 (x,y)≈(x)"), error);
    EXPECT_THROW(parse_condition("cond nonsense"), error);
}

TEST(Condition, QuasiMaltsevPairsOnBooleanDomain) {
    auto pairs = condition_pairs(minor_condition::quasi_maltsev(), 2);
    auto ids = closure(8, pairs);
    auto code = [](int a, int b, int c) { return 4 * a + 2 * b + c; };
    EXPECT_EQ(ids[code(0, 0, 1)], ids[code(1, 0, 0)]);
    EXPECT_EQ(ids[code(1, 0, 0)], ids[code(1, 1, 1)]);
    EXPECT_EQ(ids[code(1, 1, 0)], ids[code(0, 1, 1)]);
    EXPECT_EQ(ids[code(0, 1, 1)], ids[code(0, 0, 0)]);
    EXPECT_NE(ids[code(0, 1, 0)], ids[code(1, 0, 1)]);
    EXPECT_NE(ids[code(0, 0, 0)], ids[code(1, 1, 1)]);
}

TEST(Condition, TotallySymmetricPairs) {
    auto ids = closure(4, condition_pairs(minor_condition::totally_symmetric(2), 2));
    EXPECT_EQ(ids[1], ids[2]);
    EXPECT_NE(ids[0], ids[3]);
    EXPECT_NE(ids[0], ids[1]);
}

TEST(Condition, AbsorptiveGeneratorMatchesLiteralExpansion) {
    for (auto [d, k, n] : {std::tuple{2, 2, 2}, {2, 2, 3}, {2, 1, 3}, {3, 2, 2}, {2, 3, 2}, {3, 1, 3}}) {
        std::size_t size = 1;
        for (int i = 0; i < k * n; ++i) size *= d;
        auto generated = closure(size, condition_pairs(minor_condition::absorptive(k, n), d));
        EXPECT_EQ(generated, literal_absorptive_classes(d, k, n)) << d << " " << k << " " << n;
    }
}

TEST(Indicator, P2QuasiMaltsevHasFourClasses) {
    auto ind = indicator_structure(fixtures::path(2), minor_condition::quasi_maltsev());
    EXPECT_EQ(ind.result.size(), 4);
    const auto& c = ind.class_of;
    EXPECT_EQ(c[0], c[6]);
    EXPECT_EQ(c[6], c[3]);
    EXPECT_EQ(c[7], c[1]);
    EXPECT_EQ(c[1], c[4]);
    EXPECT_NE(c[2], c[5]);
}

TEST(Indicator, TrivialConditionGivesPower) {
    auto c = minor_condition::from_identities(2, {"x", "y"}, {{{0, 1}, {0, 1}}});
    auto ind = indicator_structure(fixtures::path(2), c);
    EXPECT_EQ(ind.result.size(), 4);
    EXPECT_EQ(ind.result.rel(0).size(), 1u);
}

TEST(Indicator, CapExceeded) {
    EXPECT_THROW(indicator_structure(fixtures::path(2), minor_condition::totally_symmetric(24), 1 << 20), cap_exceeded);
}

TEST(Indicator, SerialAndParallelImagesAgree) {
    auto b = fixtures::hornsat();
    auto c = minor_condition::absorptive(2, 3);
    auto ind = indicator_structure(b, c, default_dense_cap, execution::serial);
    for (std::size_t r = 0; r < b.sig().size(); ++r) {
        auto s = indicator_relation_image(b.rel(r), 2, 6, ind.class_of, execution::serial);
        auto p = indicator_relation_image(b.rel(r), 2, 6, ind.class_of, execution::parallel);
        EXPECT_EQ(s, p);
    }
    EXPECT_EQ(ind.result, indicator_structure(b, c, default_dense_cap, execution::parallel).result);
}

TEST(Indicator, AgreesWithBruteForceOnTwoElementTemplates) {
    struct named {
        minor_condition c;
        bool (*oracle)(const table3&);
    };
    std::vector<named> conds{{minor_condition::quasi_maltsev(), naive_quasi_maltsev},
                             {minor_condition::quasi_minority(), naive_quasi_minority},
                             {minor_condition::quasi_majority(), naive_quasi_majority}};
    for (const auto& b : two_element_templates())
        for (const auto& [c, naive] : conds) {
            auto ind = find_polymorphism_satisfying(b, c);
            auto bf = brute_force_search(b, c);
            const bool expected = naive_exists(b, naive);
            EXPECT_EQ(ind.has_value(), expected) << print_structure(b) << render_condition(c);
            EXPECT_EQ(bf.has_value(), expected) << print_structure(b) << render_condition(c);
            if (ind) {
                EXPECT_TRUE(naive_preserves(ind->values, b));
                EXPECT_TRUE(naive(ind->values));
            }
            if (bf) {
                EXPECT_TRUE(naive_preserves(bf->values, b));
                EXPECT_TRUE(naive(bf->values));
            }
        }
}

TEST(Polymorphism, Examples) {
    auto p2 = find_polymorphism_satisfying(fixtures::path(2), minor_condition::quasi_maltsev());
    ASSERT_TRUE(p2);
    EXPECT_TRUE(is_polymorphism(*p2, fixtures::path(2)));
    operation_table minority{3, 2, {0, 1, 1, 0, 1, 0, 0, 1}};
    EXPECT_TRUE(is_polymorphism(minority, fixtures::path(2)));
    EXPECT_TRUE(satisfies(minority, minor_condition::quasi_maltsev()));
    EXPECT_TRUE(satisfies(minority, minor_condition::quasi_minority()));
    EXPECT_FALSE(satisfies(minority, minor_condition::quasi_majority()));

    EXPECT_FALSE(find_polymorphism_satisfying(fixtures::transitive_tournament(3), minor_condition::quasi_maltsev()));
    EXPECT_FALSE(find_polymorphism_satisfying(fixtures::hornsat(), minor_condition::quasi_majority()));
    EXPECT_FALSE(naive_exists(fixtures::hornsat(), naive_quasi_majority));
    EXPECT_FALSE(find_polymorphism_satisfying(fixtures::st_con(), minor_condition::quasi_maltsev()));
}

TEST(BruteForce, Examples) {
    auto bf = brute_force_search(fixtures::path(2), minor_condition::quasi_maltsev());
    ASSERT_TRUE(bf);
    EXPECT_TRUE(satisfies(*bf, minor_condition::quasi_maltsev()));
    auto unary = minor_condition::from_identities(1, {"x"}, {{{0}, {0}}});
    auto id = brute_force_search(fixtures::path(2), unary);
    ASSERT_TRUE(id);
    EXPECT_EQ(id->values, (std::vector<int>{0, 1}));
    EXPECT_FALSE(brute_force_search(fixtures::transitive_tournament(3), minor_condition::quasi_maltsev()));
    EXPECT_THROW(brute_force_search(fixtures::path(2), minor_condition::totally_symmetric(8)), cap_exceeded);
}

TEST(BruteForce, SerialAndParallelReturnTheSameTable) {
    for (const auto& b : {fixtures::path(2), fixtures::path(3), fixtures::st_con(), fixtures::b_n(2)})
        for (const auto& c : {minor_condition::quasi_maltsev(), minor_condition::quasi_majority(),
                              minor_condition::totally_symmetric(3)})
            EXPECT_EQ(brute_force_search(b, c, 64, execution::serial), brute_force_search(b, c, 64, execution::parallel));
}

TEST(Polymorphism, QuasiMinorityWitnessIsQuasiMaltsev) {
    for (const auto& b : two_element_templates()) {
        auto t = find_polymorphism_satisfying(b, minor_condition::quasi_minority());
        if (t) EXPECT_TRUE(satisfies(*t, minor_condition::quasi_maltsev()));
    }
}

TEST(TotallySymmetric, Examples) {
    EXPECT_TRUE(totally_symmetric_check(fixtures::hornsat()).holds);
    EXPECT_TRUE(totally_symmetric_check(fixtures::path(2)).holds);
    EXPECT_FALSE(totally_symmetric_check(fixtures::directed_cycle(3)).holds);
    auto ps = subset_power_structure(fixtures::path(2));
    EXPECT_EQ(ps.result.size(), 3);
    // only ({0},{1}) is related
    EXPECT_EQ(ps.result.rel(0).size(), 1u);
}

TEST(TotallySymmetric, AgreesWithDenseIndicatorOnTwoElementTemplates) {
    for (const auto& b : two_element_templates()) {
        auto r = totally_symmetric_check(b);
        auto dense = find_polymorphism_satisfying(b, minor_condition::totally_symmetric(4));
        EXPECT_EQ(r.holds, dense.has_value()) << print_structure(b);
        if (r.holds) {
            ASSERT_TRUE(r.map);
            EXPECT_TRUE(is_homomorphism(*r.map, r.power.result, b));
        }
    }
}

TEST(Absorptive, Examples) {
    auto p2 = absorptive_check(fixtures::path(2), 4, 4, absorptive_strategy::dense);
    EXPECT_TRUE(p2.holds);
    ASSERT_TRUE(p2.table);
    EXPECT_TRUE(is_polymorphism(*p2.table, fixtures::path(2)));
    EXPECT_TRUE(satisfies(*p2.table, minor_condition::absorptive(4, 4)));
    EXPECT_FALSE(absorptive_check(fixtures::hornsat(), 2, 3, absorptive_strategy::dense).holds);
    EXPECT_TRUE(absorptive_check(fixtures::b_n(2), 2, 2, absorptive_strategy::dense).holds);
}

TEST(Absorptive, OrOfAndsIsAWitness) {
    // f(S1..S4) = OR over blocks of AND within the block, for P2 in its 0/1 reading
    operation_table f{16, 2, std::vector<int>(1 << 16)};
    for (int code = 0; code < (1 << 16); ++code) {
        int v = 0;
        for (int blk = 0; blk < 4; ++blk) v |= ((code >> (12 - 4 * blk)) & 0xF) == 0xF;
        f.values[code] = v;
    }
    EXPECT_TRUE(satisfies(f, minor_condition::absorptive(4, 4)));
}

TEST(Absorptive, SetSystemMatchesDenseOnTwoElementTemplates) {
    for (const auto& b : two_element_templates())
        for (auto [k, n] : {std::pair{1, 2}, {2, 2}, {2, 3}}) {
            auto dense = absorptive_check(b, k, n, absorptive_strategy::dense);
            auto sets = absorptive_check(b, k, n, absorptive_strategy::setsystem);
            EXPECT_EQ(dense.holds, sets.holds) << print_structure(b) << k << "," << n;
            if (sets.holds) {
                ASSERT_TRUE(sets.systems && sets.system_map);
                EXPECT_TRUE(is_homomorphism(*sets.system_map, sets.systems->result, b));
            }
        }
}

TEST(Absorptive, Arity6GivesQuasiMajority) {
    for (const auto& b : two_element_templates()) {
        auto r = absorptive_check(b, 2, 3, absorptive_strategy::dense);
        if (!r.holds) continue;
        ASSERT_TRUE(r.table);
        table3 m(8);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z) m[4 * x + 2 * y + z] = (*r.table)({x, y, z, x, y, z});
        EXPECT_TRUE(naive_quasi_majority(m));
        EXPECT_TRUE(naive_preserves(m, b));
    }
}

TEST(SetSystem, ElementsAreAntichains) {
    auto s = set_system_structure_of(fixtures::path(3), 2, 2);
    for (const auto& e : s.elements) {
        EXPECT_LE(e.size(), 2u);
        for (auto a : e)
            for (auto b : e)
                if (a != b) EXPECT_NE(a & b, a);
    }
}

TEST(Lattice, Examples) {
    auto t3 = lattice_polymorphisms(fixtures::transitive_tournament(3));
    ASSERT_TRUE(t3);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            EXPECT_EQ(t3->join({x, y}), std::max(x, y));
            EXPECT_EQ(t3->meet({x, y}), std::min(x, y));
        }
    auto d2 = lattice_polymorphisms(fixtures::st_con());
    ASSERT_TRUE(d2);
    EXPECT_EQ(d2->join({0, 1}), 1);
    EXPECT_EQ(d2->meet({0, 1}), 0);
    EXPECT_FALSE(lattice_polymorphisms(fixtures::hornsat()));
}

TEST(Bounds, Binomial) {
    EXPECT_EQ(binomial(2, 1), 2);
    EXPECT_EQ(binomial(5, 2), 10);
    EXPECT_EQ(binomial(4, 0), 1);
}
