#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slam/homsolver.hpp"
#include "slam/parallel.hpp"
#include "slam/structure.hpp"

namespace slam {

enum class condition_kind {
    quasi_maltsev,
    quasi_minority,
    quasi_majority,
    totally_symmetric,
    absorptive, // k-block symmetric and k-absorptive, arity k*n
    explicit_identities,
};

// A height-one identity f(lhs) = f(rhs) over variables 0..num_vars-1.
struct minor_identity {
    std::vector<int> lhs;
    std::vector<int> rhs;
    bool operator==(const minor_identity&) const = default;
};

// Minor condition with a single function symbol of the given arity.
struct minor_condition {
    condition_kind kind = condition_kind::explicit_identities;
    int arity = 1;
    int k = 0;
    int n = 0;
    std::vector<std::string> vars;
    std::vector<minor_identity> identities; // empty for totally_symmetric and absorptive

    static minor_condition quasi_maltsev();
    static minor_condition quasi_minority();
    static minor_condition quasi_majority();
    static minor_condition totally_symmetric(int n);
    static minor_condition absorptive(int k, int n);
    static minor_condition from_identities(int arity, std::vector<std::string> vars,
                                           std::vector<minor_identity> identities);

    bool operator==(const minor_condition&) const = default;
};

minor_condition parse_condition(std::string_view text);
std::string render_condition(const minor_condition& c);

using tuple_code = std::uint64_t;

// Mixed-radix code of a tuple over 0..base-1, first entry most significant.
tuple_code encode_tuple(std::span<const int> t, int base);
void decode_tuple(tuple_code code, int base, std::span<int> out);
// base^exp, or nullopt when it does not fit in 63 bits.
std::optional<std::uint64_t> checked_power(std::uint64_t base, int exp);

// Calls fn(a, b) for a set of tuple pairs over domain^arity whose generated equivalence
// is the one defined by the condition. For explicit conditions these are exactly the
// instantiated identities.
void for_each_condition_pair(const minor_condition& c, int domain_size,
                             const std::function<void(tuple_code, tuple_code)>& fn);
std::vector<std::pair<tuple_code, tuple_code>> condition_pairs(const minor_condition& c, int domain_size);

// Dense k-ary operation on 0..domain-1.
struct operation_table {
    int arity = 0;
    int domain = 0;
    std::vector<int> values; // indexed by encode_tuple

    int operator()(std::span<const int> args) const { return values[encode_tuple(args, domain)]; }
    int operator()(std::initializer_list<int> args) const {
        return (*this)(std::span<const int>(args.begin(), args.size()));
    }
    bool operator==(const operation_table&) const = default;
};

bool is_polymorphism(const operation_table& f, const structure& b);
bool satisfies(const operation_table& f, const minor_condition& c);

constexpr std::size_t default_dense_cap = std::size_t{1} << 20;

struct indicator {
    structure result;
    std::vector<int> class_of; // per tuple code of domain^arity
};

indicator indicator_structure(const structure& b, const minor_condition& c, std::size_t cap = default_dense_cap,
                              execution exec = execution::parallel);

// Image of R^(B^m) under the class map, as a relation over class ids.
relation indicator_relation_image(const relation& r, int domain_size, int arity, const std::vector<int>& class_of,
                                  execution exec);

std::optional<operation_table> find_polymorphism_satisfying(const structure& b, const minor_condition& c,
                                                            std::size_t cap = default_dense_cap);

// Exhaustive search over operation tables with incremental pruning; independent of
// the indicator construction. entry_cap bounds the table size |B|^arity. Returns the
// lexicographically first table.
std::optional<operation_table> brute_force_search(const structure& b, const minor_condition& c,
                                                  std::uint64_t entry_cap = 64,
                                                  execution exec = execution::parallel);

// Subsets of the domain as bit masks; set-system based strategies need |B| <= 16.
using subset_mask = std::uint32_t;

struct power_structure {
    structure result;
    std::vector<subset_mask> elements; // subset per element of result
};

// Structure on the nonempty subsets of B, a subset tuple being related when it is the
// coordinatewise projection of a nonempty subset of R^B.
power_structure subset_power_structure(const structure& b);

struct totally_symmetric_result {
    bool holds = false;
    power_structure power;
    std::optional<homomorphism> map; // power -> b when holds
};

totally_symmetric_result totally_symmetric_check(const structure& b);

enum class absorptive_strategy { dense, setsystem };

struct set_system_structure {
    structure result;
    std::vector<std::vector<subset_mask>> elements; // sorted antichain per element
};

// Domain: antichains of at most n nonempty subsets of size at most k.
set_system_structure set_system_structure_of(const structure& b, int k, int n);

struct absorptive_result {
    bool holds = false;
    std::optional<operation_table> table;          // dense witness
    std::optional<set_system_structure> systems;   // setsystem domain
    std::optional<homomorphism> system_map;        // setsystem witness
};

// Throws cap_exceeded when the dense indicator domain exceeds cap.
absorptive_result absorptive_check(const structure& b, int k, int n, absorptive_strategy strategy,
                                   std::size_t cap = default_dense_cap);

struct lattice_pair {
    std::vector<std::vector<char>> leq; // leq[i][j] <=> i <= j
    operation_table join;
    operation_table meet;
};

// First lattice order on the domain (|B| <= 5) whose join and meet are polymorphisms.
std::optional<lattice_pair> lattice_polymorphisms(const structure& b);

int binomial(int n, int k);

} // namespace slam
