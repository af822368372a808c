#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dunkl/vector_ops.hpp"

namespace dunkl {

/// Raised when reflection closure of a simple system does not terminate
/// within the size cap (non-crystallographic or otherwise ill-posed input).
class ClosureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Family { A, B, RankOne };

Family parse_family(const std::string& name);
std::string to_string(Family f);

/// Reflection of x in the hyperplane orthogonal to alpha.
Vec reflect(std::span<const double> alpha, std::span<const double> x);

/// A reduced root system together with a choice of simple and positive roots
/// and the partition of the roots into Weyl-group orbits.
///
/// Roots are kept in descending lexicographic order, so root indices, orbit
/// labels and iteration order do not depend on how the system was built.
/// Orbit labels are assigned in order of the first root index of each orbit.
/// Instances are immutable once constructed.
class RootSystem {
public:
    static constexpr double kTolerance = 1e-9;
    static constexpr std::size_t kDefaultMaxRoots = 10000;

    /// Smallest reflection-closed set containing +/-simple.
    static RootSystem from_simple(const std::vector<Vec>& simple,
                                  std::size_t max_roots = kDefaultMaxRoots);

    /// The classical systems: A_{m-1} in R^m (m >= 2), B_m in R^m (m >= 1)
    /// and the rank-one system {+1, -1} (m == 1).
    static RootSystem catalog(Family family, int m);

    /// Builds from an explicit root list and simple system, validating every
    /// root-system axiom. Used by the catalog and the text reader.
    static RootSystem assemble(std::vector<Vec> roots, const std::vector<Vec>& simple);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return roots_.size(); }
    std::size_t rank() const { return simple_idx_.size(); }

    const std::vector<Vec>& roots() const { return roots_; }
    const Vec& root(std::size_t i) const { return roots_.at(i); }

    /// Indices into roots(), in the order the simple system was given.
    const std::vector<std::size_t>& simple_indices() const { return simple_idx_; }
    const Vec& simple(std::size_t j) const { return roots_[simple_idx_.at(j)]; }

    /// Indices into roots() of the positive roots, ascending.
    const std::vector<std::size_t>& positive_indices() const { return positive_idx_; }
    const Vec& positive(std::size_t p) const { return roots_[positive_idx_.at(p)]; }
    std::size_t positive_count() const { return positive_idx_.size(); }

    /// Orbit label of root i, in [0, orbit_count()).
    std::size_t orbit_of(std::size_t i) const { return orbit_.at(i); }
    std::size_t orbit_count() const { return orbit_count_; }
    const std::vector<std::size_t>& orbit_labels() const { return orbit_; }

    /// Orbits as index classes, ordered by first root index.
    std::vector<std::vector<std::size_t>> orbits() const;

    std::optional<std::size_t> find(std::span<const double> v) const;

    /// Coordinates of v in the simple basis (least squares on span(S)).
    Vec simple_coordinates(std::span<const double> v) const;

    /// Position of root index i in the simple list, if simple.
    std::optional<std::size_t> simple_position(std::size_t root_index) const;

    /// Position of root index i in the positive list, if positive.
    std::optional<std::size_t> positive_position(std::size_t root_index) const;

    bool operator==(const RootSystem& other) const;

private:
    RootSystem() = default;

    std::size_t dim_ = 0;
    std::vector<Vec> roots_;
    std::vector<std::size_t> simple_idx_;
    std::vector<std::size_t> positive_idx_;
    std::vector<std::size_t> orbit_;
    std::size_t orbit_count_ = 0;
    // Inverse Gram matrix of the simple roots, row-major rank x rank.
    std::vector<double> gram_inv_;
};

/// Nonnegative weights, constant on orbits.
class Multiplicity {
public:
    Multiplicity() = default;
    explicit Multiplicity(std::vector<double> per_orbit);

    /// Same value on every orbit.
    static Multiplicity uniform(const RootSystem& system, double k);

    /// B_m convention: k_short on {+/-e_i}, k_long on {+/-e_i +/- e_j}.
    static Multiplicity for_b(const RootSystem& system, double k_short, double k_long);

    std::size_t orbit_count() const { return values_.size(); }
    double orbit_value(std::size_t orbit) const { return values_.at(orbit); }
    const std::vector<double>& values() const { return values_; }

    double of_root(const RootSystem& system, std::size_t root_index) const
    {
        return values_.at(system.orbit_of(root_index));
    }

    bool operator==(const Multiplicity&) const = default;

private:
    std::vector<double> values_;
};

/// A point together with its margins <alpha, x> over the positive roots.
struct ChamberPoint {
    Vec x;
    Vec margins;

    static ChamberPoint at(const RootSystem& system, Vec x);

    bool in_closure() const;
    double min_margin() const;
};

enum class ChamberRegion { Interior, Boundary, Exterior };

struct Membership {
    ChamberRegion region = ChamberRegion::Exterior;
    /// Positions in the simple list of the roots with |<alpha, x>| <= tol.
    std::vector<std::size_t> active;
};

/// Default boundary tolerance 1e-12 * (1 + |x|).
double default_boundary_tol(std::span<const double> x);

Membership chamber_membership(const RootSystem& system, std::span<const double> x,
                              std::optional<double> tol = std::nullopt);

/// Unit inward normal alpha / |alpha| at a point lying on exactly one wall.
/// Corners (several active walls) and interior points are rejected with
/// std::invalid_argument naming the active roots.
Vec facet_normal(const RootSystem& system, std::span<const double> x,
                 std::optional<double> tol = std::nullopt);

}  // namespace dunkl
