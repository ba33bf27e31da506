#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slam::detail {

// Inverse of subset_predicate.
std::optional<std::uint64_t> parse_subset_predicate(std::string_view name, int domain_size);

// Distinct variable names used for an EDB atom of the given arity.
std::vector<std::string> variable_names(int arity);

} // namespace slam::detail
