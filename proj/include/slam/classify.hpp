#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slam/datalog.hpp"
#include "slam/parallel.hpp"
#include "slam/polymorph.hpp"
#include "slam/structure.hpp"

namespace slam {

// ---- instance enumeration

constexpr std::uint64_t default_instance_budget = std::uint64_t{1} << 26;

// Number of labeled structures with exactly `size` elements (loops and repeated
// entries included); throws cap_exceeded beyond the budget.
std::uint64_t instance_count(const signature& sig, int size, std::uint64_t budget = default_instance_budget);

// The index-th labeled structure of the given size: bit i of the index selects the
// i-th candidate tuple, relations in signature order and tuples lexicographically.
structure instance_at(const signature& sig, int size, std::uint64_t index);

// All labeled structures with at most max_size elements, by size and then index.
std::vector<structure> enumerate_instances(const signature& sig, int max_size,
                                           std::uint64_t budget = default_instance_budget);

struct instance_ref {
    int size = 0;
    std::uint64_t index = 0;
    auto operator<=>(const instance_ref&) const = default;
};

// Calls test on every labeled structure with at most max_size elements and returns the
// ones for which it is false, in enumeration order. `test` must be safe to call
// concurrently.
std::vector<instance_ref> sweep_instances(const signature& sig, int max_size,
                                          const std::function<bool(const structure&)>& test,
                                          execution exec = execution::parallel,
                                          std::uint64_t budget = default_instance_budget,
                                          std::uint64_t* checked = nullptr);

// Uniformly random labeled structure where each candidate tuple is present with the given
// probability.
template <class Rng>
structure random_instance(const signature& sig, int size, double density, Rng& rng);

// ---- verification harness

struct verification_report {
    std::uint64_t checked = 0;
    std::vector<structure> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

// Compares the goal verdict of p with homomorphism existence on every labeled instance
// up to size_cap and on `samples` random instances with size_cap + 1 elements.
verification_report verify_program_solves(const program& p, const structure& b, int size_cap,
                                          std::size_t samples = 0, std::uint64_t seed = 1,
                                          execution exec = execution::parallel);

// Checks (no obstruction maps to A) <=> (A maps to b) for every A up to size_cap.
verification_report verify_duality_pair(const std::vector<structure>& obstructions, const structure& b,
                                        int size_cap, execution exec = execution::parallel);

// ---- classification

enum class verdict_value { yes, no, inconclusive };

std::string to_string(verdict_value v);

struct verdict {
    verdict_value value = verdict_value::inconclusive;
    std::string witness; // key into classification_report::witnesses, empty when none
    std::string note;
};

struct classify_caps {
    std::size_t dense = default_dense_cap;
    int max_k = 3;
    int max_n = 3;
};

struct absorptive_witness {
    int k = 0;
    int n = 0;
    absorptive_strategy strategy = absorptive_strategy::dense;
    absorptive_result result;
};

struct classification_report {
    std::string structure_name;
    std::string structure_hash;
    int m = 0;
    int k0 = 0;
    int n0 = 0;
    verdict tree_duality;
    verdict quasi_maltsev;
    verdict caterpillar_lam;
    verdict slam;
    classify_caps caps;

    std::optional<totally_symmetric_result> totally_symmetric;
    std::optional<operation_table> quasi_maltsev_table;
    std::optional<lattice_pair> lattice;
    bool lattice_on_core = false;
    std::optional<absorptive_witness> absorptive;
    std::pair<int, int> frontier{0, 0}; // last (k, n) examined by the sweep
    std::map<std::string, double> timing_ms;
};

classification_report classify(const structure& b, const classify_caps& caps = {});

// JSON report; timing is left out unless requested so reports are reproducible.
std::string report_json(const classification_report& r, bool include_timing = false);

// Canonical slam program, after checking that the slam verdict is Yes.
program emit_slam(const structure& b, const classify_caps& caps = {});

// FNV-1a of the printed structure, as 16 hex digits.
std::string structure_hash(const structure& b);

} // namespace slam

#include "slam/detail/random_instance.hpp"
