#include "slam/fixtures.hpp"

namespace slam::fixtures {

namespace {

structure digraph(int n, std::initializer_list<std::pair<int, int>> edges, std::string name) {
    structure s(signature{{"E", 2}}, n, std::move(name));
    for (auto [x, y] : edges) s.add_tuple(0, {x, y});
    return s;
}

} // namespace

structure path(int n) {
    structure s(signature{{"E", 2}}, n, "P" + std::to_string(n));
    for (int i = 0; i + 1 < n; ++i) s.add_tuple(0, {i, i + 1});
    return s;
}

structure transitive_tournament(int n) {
    structure s(signature{{"E", 2}}, n, "T" + std::to_string(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.add_tuple(0, {i, j});
    return s;
}

structure directed_cycle(int n) {
    structure s(signature{{"E", 2}}, n, "C" + std::to_string(n));
    for (int i = 0; i < n; ++i) s.add_tuple(0, {i, (i + 1) % n});
    return s;
}

structure b_n(int n) {
    structure s(signature{{"Z", 1}, {"R", n}}, 2, "B" + std::to_string(n));
    s.add_tuple(0, {0});
    std::vector<int> t(n, 0);
    for (int code = 1; code < (1 << n); ++code) {
        for (int i = 0; i < n; ++i) t[i] = (code >> (n - 1 - i)) & 1;
        s.add_tuple(1, t);
    }
    return s;
}

structure f_n(int n) {
    structure s(signature{{"Z", 1}, {"R", n}}, n, "F" + std::to_string(n));
    std::vector<int> t;
    for (int i = 0; i < n; ++i) {
        s.add_tuple(0, {i});
        t.push_back(i);
    }
    s.add_tuple(1, t);
    return s;
}

structure st_con() {
    structure s(signature{{"C0", 1}, {"C1", 1}, {"Le", 2}}, 2, "D2");
    s.add_tuple(0, {0});
    s.add_tuple(1, {1});
    s.add_tuple(2, {0, 0});
    s.add_tuple(2, {0, 1});
    s.add_tuple(2, {1, 1});
    return s;
}

structure hornsat() {
    structure s(signature{{"C0", 1}, {"C1", 1}, {"H", 3}}, 2, "HornSat");
    s.add_tuple(0, {0});
    s.add_tuple(1, {1});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                if (!(x == 1 && y == 1 && z == 0)) s.add_tuple(2, {x, y, z});
    return s;
}

namespace {

signature weak_rules_signature() {
    return signature{{"E", 2}, {"C0", 1}, {"C0p", 1}, {"C1", 1}, {"Ca", 1}, {"Cb", 1}, {"Cbp", 1}};
}

} // namespace

structure weak_rules_template() {
    structure s(weak_rules_signature(), 6, "WeakRules");
    for (auto [x, y] : {std::pair{0, 2}, {1, 2}, {3, 4}, {3, 5}}) s.add_tuple(0, {x, y});
    for (int e = 0; e < 6; ++e) s.add_tuple(1 + e, {e});
    return s;
}

structure weak_rules_instance() {
    structure s(weak_rules_signature(), 2, "WeakRulesInstance");
    s.add_tuple("E", {0, 1});
    s.add_tuple("C0", {0});
    s.add_tuple("Cb", {1});
    return s;
}

structure caterpillar_example() {
    structure s(signature{{"P", 1}, {"E", 2}, {"R", 3}}, 6, "Caterpillar");
    s.add_tuple("R", {0, 1, 2});
    s.add_tuple("R", {2, 3, 4});
    s.add_tuple("E", {2, 5});
    s.add_tuple("P", {2});
    s.add_tuple("P", {0});
    s.add_tuple("P", {5});
    return s;
}

structure non_caterpillar_example() {
    structure s(signature{{"P", 1}, {"E", 2}, {"R", 3}}, 5, "NonCaterpillar");
    s.add_tuple("E", {0, 1});
    s.add_tuple("R", {1, 2, 3});
    s.add_tuple("P", {2});
    s.add_tuple("E", {3, 4});
    return s;
}

structure unfolding_tree() {
    return digraph(7, {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {5, 6}}, "UnfoldTree");
}

structure unfolding_tree_unfolded() {
    // 0 1 a 2 3 b' | a' 2' 3' | 2'' 3'' b'' 4
    return digraph(13,
                   {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {7, 5}, {7, 8}, {6, 7}, {6, 9}, {9, 10}, {9, 11}, {11, 12}},
                   "UnfoldTreeUnfolded");
}

std::string p2_program_text() {
    return "A(x) :- E(x,y).\n"
           "goal :- E(x,y), A(y).\n";
}

std::string p3_program_text() {
    return "A(x) :- E(x,y).\n"
           "B(x) :- A(y), E(x,y).\n"
           "A(y) :- B(x), E(x,y).\n"
           "goal :- B(y), E(x,y).\n";
}

} // namespace slam::fixtures
