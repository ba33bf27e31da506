#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slam/structure.hpp"

namespace slam {

enum class predicate_kind { edb, idb, goal };

struct atom {
    predicate_kind kind = predicate_kind::idb;
    std::string pred;
    std::vector<std::string> args;

    bool operator==(const atom&) const = default;
    auto operator<=>(const atom&) const = default;
};

struct rule {
    atom head;
    std::vector<atom> body;

    bool operator==(const rule&) const = default;
};

struct program {
    signature edb;
    std::vector<relation_symbol> idb; // excludes goal; monadic programs use arity 1
    std::vector<rule> rules;

    std::optional<std::size_t> find_rule(const rule& r) const;
};

constexpr std::string_view goal_name = "goal";

// Grammar: one `Head :- Body1, ..., BodyN.` per line, `goal` is the 0-ary goal, `%` and
// `#` start comments, and an optional `@edb R/2 S/1` line fixes the EDB signature (otherwise
// predicates that never occur in a head are EDBs).
program parse_program(std::string_view text);
std::string render_program(const program& p);
std::string render_rule(const rule& r);

struct fragment_flags {
    bool monadic = false;
    bool arc = false;
    bool linear = false;
    bool symmetric = false;
    bool operator==(const fragment_flags&) const = default;
};

fragment_flags fragment_of(const program& p);

// Swaps the head with the first IDB atom of the body.
rule reverse_rule(const rule& r);

struct ground_fact {
    std::string pred;
    std::vector<int> args;
    bool operator==(const ground_fact&) const = default;
    auto operator<=>(const ground_fact&) const = default;
};

std::string render_fact(const ground_fact& f);

struct derivation_step {
    ground_fact fact;
    int rule_id = -1;
    rule used;
    std::vector<std::pair<std::string, int>> bindings; // variable -> instance element
};

// Steps in derivation order; each body IDB fact is an EDB fact or an earlier step.
struct derivation {
    std::vector<derivation_step> steps;
};

std::string derivation_json(const derivation& d);

struct evaluation {
    std::vector<ground_fact> facts; // derived IDB facts in derivation order (goal last if derived)
    bool goal = false;
    std::optional<derivation> trace; // ancestors of the goal fact
};

// Least fixpoint by semi-naive rounds; stop_at_goal ends the computation in the round
// that first derives the goal.
evaluation evaluate(const program& p, const structure& a, bool stop_at_goal = false);

enum class fragment { am, lam, slam };

std::string subset_predicate(const std::vector<int>& elements);
std::string subset_predicate(std::uint64_t mask, int domain_size);

program canonical_program(const structure& b, fragment f);

// Validity of a monadic arc rule in the IDB expansion of b, where IDB names denote subsets.
bool rule_valid(const rule& r, const structure& b);

// Rewrites a goal-deriving canonical LAM derivation into one of the canonical slam program.
derivation repair_to_symmetric(const derivation& d, const structure& b);
derivation repair_to_symmetric(const derivation& d, const structure& b, const program& slam);

} // namespace slam
