#pragma once

#include <iosfwd>
#include <string>

#include "dunkl/root_system.hpp"
#include "dunkl/sde.hpp"

namespace dunkl {

/// Shortest decimal form that reads back to the same double (17 significant digits).
std::string format_double(double v);

/// Columns t, x_1..x_m, min_margin with a header row.
void write_csv(std::ostream& out, const PathRecord& path);
void write_csv_file(const std::string& path, const PathRecord& record);

/// Plain-text root system:
///
///     dimension 3
///     simple 4 2
///     orbits 0 0 0 0 0 0
///     <one root per line>
void write_root_system(std::ostream& out, const RootSystem& rs);
/// Inverse of write_root_system. The orbit labels are checked against the
/// labels recomputed from the roots.
RootSystem read_root_system(std::istream& in);

}  // namespace dunkl
