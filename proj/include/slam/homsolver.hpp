#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "slam/bitset.hpp"
#include "slam/structure.hpp"

namespace slam {

using homomorphism = std::vector<int>;

// Per instance element, the target values that survived propagation.
struct candidate_sets {
    int target_size = 0;
    std::vector<bitset> sets;
};

// Backtracking homomorphism search into a fixed target, with generalised arc
// consistency at every node. Variables are branched lowest index first and values
// lowest first, so results are deterministic and enumeration is lexicographic.
class hom_solver {
public:
    explicit hom_solver(const structure& target);

    const structure& target() const { return target_; }

    std::optional<candidate_sets> arc_consistency(const structure& instance) const;

    std::optional<homomorphism> find(const structure& instance) const;
    // Search restricted to the given initial candidate sets (one per instance element).
    std::optional<homomorphism> find(const structure& instance, const std::vector<bitset>& initial) const;
    bool exists(const structure& instance) const { return find(instance).has_value(); }

    std::vector<homomorphism> enumerate(const structure& instance,
                                        std::size_t limit = std::numeric_limits<std::size_t>::max()) const;

private:
    const structure& target_;
};

std::optional<candidate_sets> arc_consistency(const structure& a, const structure& b);
std::optional<homomorphism> find_homomorphism(const structure& a, const structure& b);
std::vector<homomorphism> enumerate_homomorphisms(const structure& a, const structure& b,
                                                  std::size_t limit = std::numeric_limits<std::size_t>::max());
bool hom_equivalent(const structure& a, const structure& b);

// Exact check that h maps every tuple of a into b.
bool is_homomorphism(const homomorphism& h, const structure& a, const structure& b);

struct core_result {
    structure core;
    std::vector<int> retraction; // input element -> core element
};

core_result core_of(const structure& b);
// True when b has no non-surjective endomorphism.
bool is_core(const structure& b);

} // namespace slam
