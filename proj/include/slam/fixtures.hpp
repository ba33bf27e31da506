#pragma once

#include <string>

#include "slam/structure.hpp"

namespace slam::fixtures {

// Directed path with n vertices 0 -> 1 -> ... -> n-1, relation E.
structure path(int n);
// Transitive tournament on 0..n-1 (E = <).
structure transitive_tournament(int n);
// Directed cycle on 0..n-1.
structure directed_cycle(int n);
// Domain {0,1}, Z = {0}, R = {0,1}^n minus the all-zero tuple.
structure b_n(int n);
// Domain 0..n-1, Z = everything, R = {(0,...,n-1)}; the obstruction of b_n.
structure f_n(int n);
// ({0,1}; C0 = {0}, C1 = {1}, Le = <=).
structure st_con();
// ({0,1}; C0, C1, H = {0,1}^3 minus (1,1,0)).
structure hornsat();

// Domain {0, 0', 1, a, b, b'} coded 0..5, E = {(0,1),(0',1),(a,b),(a,b')} and one
// constant relation per element (C0, C0p, C1, Ca, Cb, Cbp).
structure weak_rules_template();
// Domain {0, b} coded 0..1 over the same signature, E = {(0,b)}, C0 = {0}, Cb = {b}.
structure weak_rules_instance();

// Structures over P/1, E/2, R/3 whose incidence graphs are a caterpillar and a
// non-caterpillar tree.
structure caterpillar_example();
structure non_caterpillar_example();

// Tree 0 -> a, 1 -> a, a -> 2, 2 -> 3, 2 -> b, b -> 4 with a = 2 and b = 5 after coding.
structure unfolding_tree();
constexpr int unfolding_a = 2;
constexpr int unfolding_b = 5;
// Its (a,b)-unfolding as drawn.
structure unfolding_tree_unfolded();

// Slam programs for CSP(P2) and CSP(P3).
std::string p2_program_text();
std::string p3_program_text();

} // namespace slam::fixtures
