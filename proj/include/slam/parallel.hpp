#pragma once

namespace slam {

// Execution policy for the kernels that have both a serial reference and an
// OpenMP implementation. Results never depend on the choice or on the job count.
enum class execution { serial, parallel };

// Worker count for parallel kernels; 0 keeps the OpenMP default.
void set_jobs(int jobs);
int jobs();

} // namespace slam
