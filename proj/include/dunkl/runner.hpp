#pragma once

#include <iosfwd>

#include "dunkl/config.hpp"

namespace dunkl {

/// Runs the configured command, writes its artifacts under config.out and
/// prints one summary line per experiment to log (nothing if quiet). Returns
/// 0 iff every pass flag is true, 1 otherwise.
int run(const RunConfig& config, std::ostream& log, bool quiet = false);

}  // namespace dunkl
