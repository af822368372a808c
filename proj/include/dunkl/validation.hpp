#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dunkl/root_system.hpp"
#include "dunkl/rng.hpp"

namespace dunkl {

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// The property suite behind the validate command: algebraic identities of
/// the root systems and the potential, RNG and config plumbing, and small
/// Monte Carlo checks. Deterministic in seed.
std::vector<PropertyResult> run_validation(std::uint64_t seed);

/// A point of the open chamber with every simple margin >= min_margin,
/// drawn by folding a Gaussian point into the chamber.
Vec random_chamber_point(const RootSystem& rs, BrownianStream& stream, double min_margin = 0.05);

}  // namespace dunkl
