#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slam/structure.hpp"

namespace slam {

// A d-dimensional pp-power: target symbol R of arity r is defined by queries[R], a
// conjunctive query over `source` with d*r free variables. Free variable i*d + c is
// coordinate c of the i-th argument.
struct pp_power_spec {
    int d = 1;
    signature source;
    signature target;
    std::vector<conjunctive_query> queries;

    void validate() const;
};

// Text format:
//   ppower d=2 from E/2
//   rel R(x1,x2,y1,y2) := exists z . E(x1,z), E(z,y1), x2=y2
// Lines may also be separated by ';'. The head lists the free variables in order, `true`
// denotes the empty conjunction and `#` starts a comment.
pp_power_spec parse_pp_power_spec(std::string_view text);
std::string render_pp_power_spec(const pp_power_spec& spec);

// Domain B^d with tuples coded in base |B|, first coordinate most significant.
structure pp_power(const structure& b, const pp_power_spec& spec, std::size_t domain_cap = 1u << 20);

structure apply_gadget_reduction(const pp_power_spec& spec, const structure& c);

} // namespace slam
