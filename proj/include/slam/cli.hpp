#pragma once

#include <iosfwd>

namespace slam {

// Exit codes: 0 success / satisfiable, 1 unsatisfiable (or no homomorphism), 2 any error
// or inconclusive answer.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace slam
