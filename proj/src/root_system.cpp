#include "dunkl/root_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace dunkl {

namespace {

constexpr double kSnap = 1e-12;

void snap(Vec& v)
{
    for (auto& c : v) {
        if (std::abs(c) < kSnap)
            c = 0.0;
        else if (std::abs(c - std::round(c)) < kSnap)
            c = std::round(c);
    }
}

// Descending lexicographic order with tolerance.
bool lex_greater(const Vec& a, const Vec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i] + RootSystem::kTolerance)
            return true;
        if (a[i] < b[i] - RootSystem::kTolerance)
            return false;
    }
    return false;
}

std::optional<std::size_t> find_in(const std::vector<Vec>& set, std::span<const double> v)
{
    for (std::size_t i = 0; i < set.size(); ++i)
        if (approx_equal(set[i], v, RootSystem::kTolerance))
            return i;
    return std::nullopt;
}

std::size_t check_dims(const std::vector<Vec>& vs, const char* what)
{
    if (vs.empty())
        throw std::invalid_argument(std::string(what) + ": empty vector list");
    const std::size_t m = vs.front().size();
    if (m == 0)
        throw std::invalid_argument(std::string(what) + ": zero-dimensional vectors");
    for (const auto& v : vs) {
        if (v.size() != m)
            throw std::invalid_argument(std::string(what) + ": inconsistent dimensions");
        if (norm(v) <= RootSystem::kTolerance)
            throw std::invalid_argument(std::string(what) + ": zero vector");
    }
    return m;
}

// Returns c if b == c a for some scalar c, otherwise nullopt.
std::optional<double> proportionality(const Vec& a, const Vec& b)
{
    const double c = dot(a, b) / norm2(a);
    Vec r = b;
    axpy(-c, a, r);
    if (norm(r) <= RootSystem::kTolerance * (1.0 + norm(b)))
        return c;
    return std::nullopt;
}

// Inverse Gram matrix of the simple roots; throws if they are dependent.
std::vector<double> inverse_gram(const std::vector<Vec>& simple)
{
    const auto r = static_cast<Eigen::Index>(simple.size());
    Eigen::MatrixXd g(r, r);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            g(i, j) = dot(simple[i], simple[j]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    lu.setThreshold(1e-10);
    if (lu.rank() != r)
        throw std::invalid_argument("simple roots are linearly dependent");
    Eigen::MatrixXd inv = lu.inverse();
    std::vector<double> out(static_cast<std::size_t>(r * r));
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < r; ++j)
            out[static_cast<std::size_t>(i * r + j)] = inv(i, j);
    return out;
}

Vec coordinates(const std::vector<Vec>& simple, const std::vector<double>& gram_inv,
                std::span<const double> v)
{
    const std::size_t r = simple.size();
    Vec rhs(r);
    for (std::size_t i = 0; i < r; ++i)
        rhs[i] = dot(simple[i], v);
    Vec c(r, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            c[i] += gram_inv[i * r + j] * rhs[j];
    return c;
}

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i)
    {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

std::string index_list(const std::vector<std::size_t>& idx)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < idx.size(); ++i)
        os << (i ? ", " : "") << idx[i];
    os << ']';
    return os.str();
}

}  // namespace

Family parse_family(const std::string& name)
{
    if (name == "A")
        return Family::A;
    if (name == "B")
        return Family::B;
    if (name == "rank_one")
        return Family::RankOne;
    throw std::invalid_argument("unsupported root system family '" + name + "'");
}

std::string to_string(Family f)
{
    switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::RankOne: return "rank_one";
    }
    return "?";
}

Vec reflect(std::span<const double> alpha, std::span<const double> x)
{
    const double n2 = norm2(alpha);
    if (!(n2 > 0.0))
        throw std::invalid_argument("reflect: zero root");
    if (alpha.size() != x.size())
        throw std::invalid_argument("reflect: dimension mismatch");
    Vec out(x.begin(), x.end());
    axpy(-2.0 * dot(alpha, x) / n2, alpha, out);
    return out;
}

RootSystem RootSystem::from_simple(const std::vector<Vec>& simple, std::size_t max_roots)
{
    check_dims(simple, "from_simple");
    for (std::size_t i = 0; i < simple.size(); ++i)
        for (std::size_t j = i + 1; j < simple.size(); ++j)
            if (proportionality(simple[i], simple[j]))
                throw std::invalid_argument("from_simple: proportional simple roots");
    inverse_gram(simple);

    // W is generated by the simple reflections and R = W(S).
    std::vector<Vec> roots;
    for (const auto& s : simple) {
        roots.push_back(s);
        roots.push_back(negated(s));
    }
    for (std::size_t next = 0; next < roots.size(); ++next) {
        for (const auto& s : simple) {
            Vec r = reflect(s, roots[next]);
            snap(r);
            if (!find_in(roots, r)) {
                roots.push_back(std::move(r));
                if (roots.size() > max_roots)
                    throw ClosureError("reflection closure exceeded " + std::to_string(max_roots) +
                                       " roots; input is not a finite crystallographic system");
            }
        }
    }
    return assemble(std::move(roots), simple);
}

RootSystem RootSystem::assemble(std::vector<Vec> roots, const std::vector<Vec>& simple_in)
{
    const std::size_t m = check_dims(roots, "root system");
    check_dims(simple_in, "simple system");
    std::vector<Vec> simple = simple_in;
    for (auto& s : simple) {
        if (s.size() != m)
            throw std::invalid_argument("simple root dimension differs from roots");
        snap(s);
    }
    for (auto& r : roots)
        snap(r);
    std::sort(roots.begin(), roots.end(), lex_greater);
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (approx_equal(roots[i - 1], roots[i], kTolerance))
            throw std::invalid_argument("root system: duplicate root");

    // Reduced: the only multiples of alpha in R are +/-alpha.
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (auto c = proportionality(roots[i], roots[j]); c && std::abs(std::abs(*c) - 1.0) > kTolerance)
                throw std::invalid_argument("root system is not reduced");

    // Closed under every reflection.
    for (const auto& a : roots)
        for (const auto& b : roots)
            if (!find_in(roots, reflect(a, b)))
                throw std::invalid_argument("root system is not closed under reflections");

    RootSystem rs;
    rs.dim_ = m;
    rs.roots_ = std::move(roots);
    rs.gram_inv_ = inverse_gram(simple);
    for (const auto& s : simple) {
        auto idx = find_in(rs.roots_, s);
        if (!idx)
            throw std::invalid_argument("simple root is not a root");
        rs.simple_idx_.push_back(*idx);
    }

    for (std::size_t i = 0; i < rs.roots_.size(); ++i) {
        const Vec c = coordinates(simple, rs.gram_inv_, rs.roots_[i]);
        Vec back(m, 0.0);
        for (std::size_t j = 0; j < simple.size(); ++j)
            axpy(c[j], simple[j], back);
        if (!approx_equal(back, rs.roots_[i], 1e-8))
            throw std::invalid_argument("root outside the span of the simple system");
        const bool nonneg = std::all_of(c.begin(), c.end(), [](double v) { return v >= -1e-8; });
        const bool nonpos = std::all_of(c.begin(), c.end(), [](double v) { return v <= 1e-8; });
        if (nonneg == nonpos)
            throw std::invalid_argument("simple system is not a base: mixed-sign root coordinates");
        if (nonneg)
            rs.positive_idx_.push_back(i);
    }
    if (rs.positive_idx_.size() * 2 != rs.roots_.size())
        throw std::invalid_argument("positive system does not split R");

    DisjointSets sets(rs.roots_.size());
    for (std::size_t i = 0; i < rs.roots_.size(); ++i)
        for (const auto& b : rs.roots_)
            sets.unite(i, *find_in(rs.roots_, reflect(b, rs.roots_[i])));
    rs.orbit_.assign(rs.roots_.size(), 0);
    std::vector<std::size_t> label_of_rep(rs.roots_.size(), SIZE_MAX);
    for (std::size_t i = 0; i < rs.roots_.size(); ++i) {
        const std::size_t rep = sets.find(i);
        if (label_of_rep[rep] == SIZE_MAX)
            label_of_rep[rep] = rs.orbit_count_++;
        rs.orbit_[i] = label_of_rep[rep];
    }
    return rs;
}

RootSystem RootSystem::catalog(Family family, int m)
{
    std::vector<Vec> roots;
    std::vector<Vec> simple;
    std::vector<Vec> positive;
    const auto n = static_cast<std::size_t>(std::max(m, 0));
    auto e = [n](std::size_t i) { return unit(n, i); };
    auto combo = [](Vec a, const Vec& b, double s) {
        axpy(s, b, a);
        return a;
    };

    switch (family) {
    case Family::A:
        if (m < 2)
            throw std::invalid_argument("catalog: type A needs m >= 2");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                positive.push_back(combo(e(i), e(j), -1.0));
        for (std::size_t i = 0; i + 1 < n; ++i)
            simple.push_back(combo(e(i), e(i + 1), -1.0));
        break;
    case Family::B:
        if (m < 1)
            throw std::invalid_argument("catalog: type B needs m >= 1");
        for (std::size_t i = 0; i < n; ++i) {
            positive.push_back(e(i));
            for (std::size_t j = i + 1; j < n; ++j) {
                positive.push_back(combo(e(i), e(j), -1.0));
                positive.push_back(combo(e(i), e(j), 1.0));
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i)
            simple.push_back(combo(e(i), e(i + 1), -1.0));
        simple.push_back(e(n - 1));
        break;
    case Family::RankOne:
        if (m != 1)
            throw std::invalid_argument("catalog: rank-one system needs m == 1");
        positive.push_back({1.0});
        simple.push_back({1.0});
        break;
    }
    for (const auto& p : positive) {
        roots.push_back(p);
        roots.push_back(negated(p));
    }
    RootSystem rs = assemble(std::move(roots), simple);
    if (rs.positive_count() != positive.size())
        throw std::logic_error("catalog: positive system mismatch");
    for (const auto& p : positive) {
        auto idx = rs.find(p);
        if (!idx || !rs.positive_position(*idx))
            throw std::logic_error("catalog: positive system mismatch");
    }
    return rs;
}

std::vector<std::vector<std::size_t>> RootSystem::orbits() const
{
    std::vector<std::vector<std::size_t>> out(orbit_count_);
    for (std::size_t i = 0; i < roots_.size(); ++i)
        out[orbit_[i]].push_back(i);
    return out;
}

std::optional<std::size_t> RootSystem::find(std::span<const double> v) const
{
    if (v.size() != dim_)
        return std::nullopt;
    return find_in(roots_, v);
}

Vec RootSystem::simple_coordinates(std::span<const double> v) const
{
    std::vector<Vec> simple;
    for (auto i : simple_idx_)
        simple.push_back(roots_[i]);
    return coordinates(simple, gram_inv_, v);
}

std::optional<std::size_t> RootSystem::simple_position(std::size_t root_index) const
{
    auto it = std::find(simple_idx_.begin(), simple_idx_.end(), root_index);
    if (it == simple_idx_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - simple_idx_.begin());
}

std::optional<std::size_t> RootSystem::positive_position(std::size_t root_index) const
{
    auto it = std::lower_bound(positive_idx_.begin(), positive_idx_.end(), root_index);
    if (it == positive_idx_.end() || *it != root_index)
        return std::nullopt;
    return static_cast<std::size_t>(it - positive_idx_.begin());
}

bool RootSystem::operator==(const RootSystem& other) const
{
    if (dim_ != other.dim_ || roots_.size() != other.roots_.size() ||
        simple_idx_ != other.simple_idx_ || positive_idx_ != other.positive_idx_ ||
        orbit_ != other.orbit_)
        return false;
    for (std::size_t i = 0; i < roots_.size(); ++i)
        if (!approx_equal(roots_[i], other.roots_[i], kTolerance))
            return false;
    return true;
}

Multiplicity::Multiplicity(std::vector<double> per_orbit) : values_(std::move(per_orbit))
{
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("multiplicity values must be finite and >= 0");
}

Multiplicity Multiplicity::uniform(const RootSystem& system, double k)
{
    return Multiplicity(std::vector<double>(system.orbit_count(), k));
}

Multiplicity Multiplicity::for_b(const RootSystem& system, double k_short, double k_long)
{
    const std::size_t m = system.dim();
    std::vector<double> values(system.orbit_count(), 0.0);
    auto short_idx = system.find(unit(m, 0));
    if (!short_idx)
        throw std::invalid_argument("for_b: system has no short root e_1");
    values[system.orbit_of(*short_idx)] = k_short;
    if (m >= 2) {
        Vec l = unit(m, 0);
        l[1] = 1.0;
        auto long_idx = system.find(l);
        if (!long_idx || system.orbit_of(*long_idx) == system.orbit_of(*short_idx))
            throw std::invalid_argument("for_b: system is not of type B");
        values[system.orbit_of(*long_idx)] = k_long;
    }
    return Multiplicity(std::move(values));
}

ChamberPoint ChamberPoint::at(const RootSystem& system, Vec x)
{
    if (x.size() != system.dim())
        throw std::invalid_argument("ChamberPoint: dimension mismatch");
    ChamberPoint p;
    p.margins.reserve(system.positive_count());
    for (auto i : system.positive_indices())
        p.margins.push_back(dot(system.root(i), x));
    p.x = std::move(x);
    return p;
}

bool ChamberPoint::in_closure() const
{
    return std::all_of(margins.begin(), margins.end(), [](double v) { return v >= 0.0; });
}

double ChamberPoint::min_margin() const
{
    return *std::min_element(margins.begin(), margins.end());
}

double default_boundary_tol(std::span<const double> x) { return 1e-12 * (1.0 + norm(x)); }

Membership chamber_membership(const RootSystem& system, std::span<const double> x,
                              std::optional<double> tol_in)
{
    if (x.size() != system.dim())
        throw std::invalid_argument("chamber_membership: dimension mismatch");
    const double tol = tol_in.value_or(default_boundary_tol(x));
    Membership out;
    bool all_pos = true;
    bool any_neg = false;
    for (std::size_t j = 0; j < system.rank(); ++j) {
        const double v = dot(system.simple(j), x);
        if (v <= tol)
            all_pos = false;
        if (v < -tol)
            any_neg = true;
        if (std::abs(v) <= tol)
            out.active.push_back(j);
    }
    // The simple-root and positive-root descriptions of the chamber agree.
    bool pos_all_pos = true;
    bool pos_any_neg = false;
    for (auto i : system.positive_indices()) {
        const Vec c = system.simple_coordinates(system.root(i));
        const double weight = std::accumulate(c.begin(), c.end(), 0.0);
        const double v = dot(system.root(i), x);
        if (v <= tol)
            pos_all_pos = false;
        if (v < -tol * weight)
            pos_any_neg = true;
    }
    if ((all_pos && !pos_all_pos) || (any_neg != pos_any_neg))
        throw std::logic_error("chamber_membership: simple and positive chamber tests disagree");

    if (all_pos) {
        out.region = ChamberRegion::Interior;
        out.active.clear();
    } else if (!any_neg) {
        out.region = ChamberRegion::Boundary;
    } else {
        out.region = ChamberRegion::Exterior;
        out.active.clear();
    }
    return out;
}

Vec facet_normal(const RootSystem& system, std::span<const double> x, std::optional<double> tol)
{
    const Membership mem = chamber_membership(system, x, tol);
    if (mem.region != ChamberRegion::Boundary || mem.active.size() != 1)
        throw std::invalid_argument("facet_normal: need exactly one active wall, found " +
                                    std::to_string(mem.active.size()) + " " +
                                    index_list(mem.active));
    const Vec& a = system.simple(mem.active.front());
    return scaled(a, 1.0 / norm(a));
}

}  // namespace dunkl
