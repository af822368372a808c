#include "dunkl/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dunkl {

void SimConfig::validate() const
{
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("SimConfig." + key + ": " + why);
    };
    if (!(dt > 0.0) || !std::isfinite(dt))
        fail("dt", "must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        fail("horizon", "must be > 0");
    if (hit_epsilon && !(*hit_epsilon > 0.0))
        fail("hit_epsilon", "must be > 0");
    if (!(clip_fraction > 0.0 && clip_fraction < 1.0))
        fail("clip_fraction", "must lie in (0, 1)");
    if (substep_max < 1)
        fail("substep_max", "must be >= 1");
    if (n_paths < 1)
        fail("n_paths", "must be >= 1");
    if (record_stride < 1)
        fail("record_stride", "must be >= 1");
}

double SimConfig::hit_epsilon_for(std::span<const double> x0) const
{
    return hit_epsilon.value_or(1e-6 * (1.0 + norm(x0)));
}

Vec PathRecord::final_state() const
{
    auto s = state(size() - 1);
    return {s.begin(), s.end()};
}

DunklDynamics::DunklDynamics(const Potential& potential) : p_(potential)
{
    const RootSystem& rs = p_.system();
    for (std::size_t q = 0; q < rs.positive_count(); ++q) {
        Wall w;
        w.normal = rs.positive(q);
        w.label = rs.simple_position(rs.positive_indices()[q]);
        walls_.push_back(std::move(w));
    }
}

bool DunklDynamics::drift(std::span<const double> x, std::span<const char> alive,
                          std::span<double> out) const
{
    if (!alive[0]) {
        std::fill(out.begin(), out.end(), 0.0);
        return true;
    }
    return p_.drift_into(x, out);
}

void DunklDynamics::diffuse(std::span<const double>, std::span<const double> dw,
                            std::span<double> out) const
{
    std::copy(dw.begin(), dw.end(), out.begin());
}

BesselDynamics::BesselDynamics(double k0, double scale) : k0_(k0), scale_(scale)
{
    if (!(k0 >= 0.0))
        throw std::invalid_argument("BesselDynamics: k0 must be >= 0");
    if (!(scale > 0.0))
        throw std::invalid_argument("BesselDynamics: scale must be > 0");
    walls_.push_back({{1.0}, 0, 0});
}

bool BesselDynamics::drift(std::span<const double> x, std::span<const char> alive,
                           std::span<double> out) const
{
    if (!alive[0]) {
        out[0] = 0.0;
        return true;
    }
    if (!(x[0] > 0.0))
        return false;
    out[0] = k0_ * scale_ * scale_ / x[0];
    return true;
}

void BesselDynamics::diffuse(std::span<const double>, std::span<const double> dw,
                             std::span<double> out) const
{
    out[0] = scale_ * dw[0];
}

CoupledDynamics::CoupledDynamics(const Potential& potential, std::size_t j) : p_(potential)
{
    const RootSystem& rs = p_.system();
    if (j >= rs.rank())
        throw std::invalid_argument("CoupledDynamics: not a simple root position");
    alpha0_ = rs.simple(j);
    bessel_coeff_ = p_.multiplicity().of_root(rs, rs.simple_indices()[j]) * norm2(alpha0_);
    const std::size_t m = p_.dim();
    for (std::size_t q = 0; q < rs.positive_count(); ++q) {
        Wall w;
        w.normal = rs.positive(q);
        w.normal.push_back(0.0);
        w.group = 0;
        w.label = rs.simple_position(rs.positive_indices()[q]);
        walls_.push_back(std::move(w));
    }
    walls_.push_back({unit(m + 1, m), 1, j});
}

std::pair<std::size_t, std::size_t> CoupledDynamics::group_range(std::size_t g) const
{
    return g == 0 ? std::pair<std::size_t, std::size_t>{0, p_.dim()}
                  : std::pair<std::size_t, std::size_t>{p_.dim(), p_.dim() + 1};
}

bool CoupledDynamics::drift(std::span<const double> x, std::span<const char> alive,
                            std::span<double> out) const
{
    const std::size_t m = p_.dim();
    if (alive[0]) {
        if (!p_.drift_into(x.first(m), out.first(m)))
            return false;
    } else {
        std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    }
    if (alive[1]) {
        if (!(x[m] > 0.0))
            return false;
        out[m] = bessel_coeff_ / x[m];
    } else {
        out[m] = 0.0;
    }
    return true;
}

void CoupledDynamics::diffuse(std::span<const double>, std::span<const double> dw,
                              std::span<double> out) const
{
    const std::size_t m = p_.dim();
    std::copy(dw.begin(), dw.end(), out.begin());
    out[m] = dot(alpha0_, dw);
}

namespace {

enum class Advance { Running, Finished, Failed };

class Engine {
public:
    Engine(const Dynamics& dyn, const SimConfig& cfg, double eps, BrownianStream& stream)
        : dyn_(dyn), cfg_(cfg), eps_(eps), stream_(stream), n_(dyn.state_dim()),
          k_(dyn.noise_dim()), groups_(dyn.groups())
    {
        cfg_.validate();
        if (!(eps > 0.0))
            throw std::invalid_argument("hit epsilon must be > 0");
        const auto& walls = dyn_.walls();
        for (const auto& w : walls) {
            if (w.normal.size() != n_ || w.group >= groups_)
                throw std::logic_error("Dynamics: malformed wall");
            normals_.insert(normals_.end(), w.normal.begin(), w.normal.end());
        }
        margin_.resize(walls.size());
        proposal_margin_.resize(walls.size());
        drift_.resize(n_);
        inc_.resize(n_);
        proposal_.resize(n_);
        z_.resize(k_);
        cur_dw_.resize(k_);
        alive_.assign(groups_, 1);
        records_.resize(groups_);
        for (std::size_t g = 0; g < groups_; ++g) {
            auto [lo, hi] = dyn_.group_range(g);
            records_[g].dim = hi - lo;
            records_[g].min_margin = std::numeric_limits<double>::infinity();
        }
    }

    void set_state(std::span<const double> x0)
    {
        if (x0.size() != n_)
            throw std::invalid_argument("initial state has wrong dimension");
        x_.assign(x0.begin(), x0.end());
        compute_margins(x_, margin_);
        for (std::size_t w = 0; w < margin_.size(); ++w)
            if (dyn_.walls()[w].label && margin_[w] < -default_boundary_tol(x0))
                throw std::invalid_argument("initial state lies outside the closed chamber");
    }

    std::vector<PathRecord> run()
    {
        const double T = cfg_.horizon;
        const double dt = cfg_.dt;
        double t = 0.0;
        compute_margins(x_, margin_);
        record_all(0.0);
        if (min_hitting_margin_all() <= eps_) {
            if (!boundary_start())
                return finish();
            t = elapsed_;
        } else {
            for (std::size_t g = 0; g < groups_; ++g)
                update_min_margin(g, x_);
        }

        const auto n_steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
        Vec dw(k_);
        for (std::size_t j = 0; j < n_steps; ++j) {
            const double t_end = std::min(static_cast<double>(j + 1) * dt, T);
            const double h = t_end - t;
            stream_.fill_normal(dw);
            for (auto& v : dw)
                v *= std::sqrt(h);
            elapsed_ = t;
            const Advance status = advance(h, dw);
            t = t_end;
            if (status == Advance::Failed) {
                for (std::size_t g = 0; g < groups_; ++g)
                    if (alive_[g])
                        records_[g].step_failure = true;
                record_all(elapsed_);
                break;
            }
            if (status == Advance::Finished)
                break;
            if ((j + 1) % cfg_.record_stride == 0 || j + 1 == n_steps)
                record_all(t);
        }
        return finish();
    }

    // One base interval [elapsed_, elapsed_ + h] driven by dw.
    Advance advance(double h, std::span<const double> dw)
    {
        stack_.clear();
        dw_stack_.clear();
        push(h, 0, dw);
        while (!stack_.empty()) {
            const Node node = stack_.back();
            stack_.pop_back();
            std::copy_n(dw_stack_.end() - static_cast<std::ptrdiff_t>(k_), k_, cur_dw_.begin());
            dw_stack_.resize(dw_stack_.size() - k_);

            if (!dyn_.drift(x_, alive_, drift_))
                return Advance::Failed;
            compute_margins(x_, margin_);
            if (drift_too_large(node.h)) {
                if (node.depth >= cfg_.substep_max)
                    return Advance::Failed;
                split(node);
                continue;
            }

            dyn_.diffuse(x_, cur_dw_, inc_);
            for (std::size_t g = 0; g < groups_; ++g) {
                auto [lo, hi] = dyn_.group_range(g);
                for (std::size_t i = lo; i < hi; ++i)
                    proposal_[i] = alive_[g] ? x_[i] + inc_[i] + drift_[i] * node.h : x_[i];
            }
            compute_margins(proposal_, proposal_margin_);
            const Approach a = approach();
            if (node.depth < cfg_.substep_max &&
                (a == Approach::Collapse || (a == Approach::Hit && std::sqrt(node.h) > eps_))) {
                split(node);
                continue;
            }
            accept(node.h);
            if (std::none_of(alive_.begin(), alive_.end(), [](char a) { return a != 0; }))
                return Advance::Finished;
        }
        return Advance::Running;
    }

    const Vec& state() const { return x_; }
    std::size_t substeps() const { return substeps_; }
    bool any_hit() const
    {
        return std::any_of(records_.begin(), records_.end(), [](const PathRecord& r) { return r.hit; });
    }
    const PathRecord& record(std::size_t g) const { return records_[g]; }
    double elapsed() const { return elapsed_; }
    void set_elapsed(double t) { elapsed_ = t; }

private:
    struct Node {
        double h;
        int depth;
    };

    void push(double h, int depth, std::span<const double> dw)
    {
        stack_.push_back({h, depth});
        dw_stack_.insert(dw_stack_.end(), dw.begin(), dw.end());
    }

    // Brownian bridge: the first half of the increment given its total.
    void split(const Node& node)
    {
        stream_.fill_normal(z_);
        const double s = 0.5 * std::sqrt(node.h);
        Vec first(k_), second(k_);
        for (std::size_t i = 0; i < k_; ++i) {
            first[i] = 0.5 * cur_dw_[i] + s * z_[i];
            second[i] = cur_dw_[i] - first[i];
        }
        push(0.5 * node.h, node.depth + 1, second);
        push(0.5 * node.h, node.depth + 1, first);
    }

    void compute_margins(std::span<const double> x, std::span<double> out) const
    {
        for (std::size_t w = 0; w < out.size(); ++w)
            out[w] = dot({normals_.data() + w * n_, n_}, x);
    }

    bool drift_too_large(double h) const
    {
        const auto& walls = dyn_.walls();
        for (std::size_t w = 0; w < walls.size(); ++w) {
            if (!alive_[walls[w].group])
                continue;
            const double rate = dot({normals_.data() + w * n_, n_}, drift_);
            if (h * std::abs(rate) > cfg_.clip_fraction * margin_[w])
                return true;
        }
        return false;
    }

    enum class Approach { None, Collapse, Hit };

    // Hit: the proposal ends within eps of a hitting wall. Collapse: it keeps
    // less than 1 - clip_fraction of some hitting-wall margin.
    Approach approach() const
    {
        const auto& walls = dyn_.walls();
        Approach a = Approach::None;
        for (std::size_t w = 0; w < walls.size(); ++w) {
            if (!walls[w].label || !alive_[walls[w].group])
                continue;
            if (proposal_margin_[w] <= eps_)
                return Approach::Hit;
            if (proposal_margin_[w] < (1.0 - cfg_.clip_fraction) * margin_[w])
                a = Approach::Collapse;
        }
        return a;
    }

    double min_hitting_margin(std::size_t g, std::span<const double> margins) const
    {
        double mn = std::numeric_limits<double>::infinity();
        const auto& walls = dyn_.walls();
        for (std::size_t w = 0; w < walls.size(); ++w)
            if (walls[w].label && walls[w].group == g)
                mn = std::min(mn, margins[w]);
        return mn;
    }

    double min_hitting_margin_all() const
    {
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < groups_; ++g)
            mn = std::min(mn, min_hitting_margin(g, margin_));
        return mn;
    }

    void update_min_margin(std::size_t g, std::span<const double> x)
    {
        Vec m(margin_.size());
        compute_margins(x, m);
        records_[g].min_margin = std::min(records_[g].min_margin, min_hitting_margin(g, m));
    }

    void accept(double h)
    {
        elapsed_ += h;
        ++substeps_;
        const auto& walls = dyn_.walls();
        for (std::size_t g = 0; g < groups_; ++g) {
            if (!alive_[g])
                continue;
            auto [lo, hi] = dyn_.group_range(g);
            std::optional<std::size_t> hit_wall;
            double frac = 1.0;
            for (std::size_t w = 0; w < walls.size(); ++w) {
                if (!walls[w].label || walls[w].group != g || proposal_margin_[w] > eps_)
                    continue;
                if (!hit_wall || proposal_margin_[w] < proposal_margin_[*hit_wall])
                    hit_wall = w;
                if (proposal_margin_[w] < 0.0)
                    frac = std::min(frac, margin_[w] / (margin_[w] - proposal_margin_[w]));
            }
            for (std::size_t i = lo; i < hi; ++i)
                x_[i] = x_[i] + frac * (proposal_[i] - x_[i]);
            PathRecord& rec = records_[g];
            ++rec.substeps_used;
            update_min_margin(g, x_);
            if (hit_wall) {
                alive_[g] = 0;
                rec.hit = true;
                rec.hit_time = elapsed_;
                rec.hit_root = walls[*hit_wall].label;
                push_row(g, elapsed_);
            }
        }
    }

    // Drift-free noise substep from a boundary point, folded back into the
    // chamber by reflections in the crossed walls.
    bool boundary_start()
    {
        const double h0 = cfg_.dt / cfg_.substep_max;
        stream_.fill_normal(z_);
        for (auto& v : z_)
            v *= std::sqrt(h0);
        dyn_.diffuse(x_, z_, inc_);
        for (std::size_t i = 0; i < n_; ++i)
            x_[i] += inc_[i];
        const auto& walls = dyn_.walls();
        for (int it = 0; it < 256; ++it) {
            compute_margins(x_, margin_);
            std::optional<std::size_t> worst;
            for (std::size_t w = 0; w < walls.size(); ++w)
                if (walls[w].label && margin_[w] < 0.0 && (!worst || margin_[w] < margin_[*worst]))
                    worst = w;
            if (!worst)
                break;
            std::span<const double> nrm{normals_.data() + *worst * n_, n_};
            axpy(-2.0 * margin_[*worst] / norm2(nrm), nrm, x_);
        }
        compute_margins(x_, margin_);
        elapsed_ = h0;
        ++substeps_;
        for (auto& r : records_)
            ++r.substeps_used;
        if (min_hitting_margin_all() <= eps_) {
            for (auto& r : records_)
                r.boundary_start_failure = true;
            return false;
        }
        for (std::size_t g = 0; g < groups_; ++g)
            update_min_margin(g, x_);
        return true;
    }

    void push_row(std::size_t g, double t)
    {
        auto [lo, hi] = dyn_.group_range(g);
        PathRecord& rec = records_[g];
        if (!rec.times.empty() && rec.times.back() == t)
            return;
        rec.times.push_back(t);
        rec.states.insert(rec.states.end(), x_.begin() + static_cast<std::ptrdiff_t>(lo),
                          x_.begin() + static_cast<std::ptrdiff_t>(hi));
        Vec m(margin_.size());
        compute_margins(x_, m);
        rec.row_margins.push_back(min_hitting_margin(g, m));
    }

    void record_all(double t)
    {
        for (std::size_t g = 0; g < groups_; ++g)
            if (alive_[g])
                push_row(g, t);
    }

    std::vector<PathRecord> finish()
    {
        for (auto& r : records_)
            if (!std::isfinite(r.min_margin))
                r.min_margin = r.row_margins.empty() ? 0.0 : r.row_margins.front();
        return std::move(records_);
    }

    const Dynamics& dyn_;
    SimConfig cfg_;
    double eps_;
    BrownianStream& stream_;
    std::size_t n_, k_, groups_;
    std::vector<double> normals_;
    Vec x_, margin_, proposal_margin_, drift_, inc_, proposal_, z_, cur_dw_;
    std::vector<char> alive_;
    std::vector<PathRecord> records_;
    std::vector<Node> stack_;
    std::vector<double> dw_stack_;
    double elapsed_ = 0.0;
    std::size_t substeps_ = 0;
};

}  // namespace

std::vector<PathRecord> integrate(const Dynamics& dynamics, std::span<const double> x0,
                                  const SimConfig& cfg, double hit_epsilon,
                                  BrownianStream& stream)
{
    Engine engine(dynamics, cfg, hit_epsilon, stream);
    engine.set_state(x0);
    return engine.run();
}

StepOutcome step(const Potential& p, std::span<const double> x, std::span<const double> dW,
                 double dt, const SimConfig& cfg, BrownianStream& stream,
                 std::optional<double> hit_epsilon)
{
    if (dW.size() != p.dim())
        throw std::invalid_argument("step: increment has wrong dimension");
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be > 0");
    for (std::size_t q = 0; q < p.system().positive_count(); ++q)
        if (!(dot(p.system().positive(q), x) > 0.0))
            throw std::domain_error("step: state is not interior");
    DunklDynamics dyn(p);
    SimConfig local = cfg;
    local.dt = dt;
    local.horizon = dt;
    Engine engine(dyn, local, hit_epsilon.value_or(cfg.hit_epsilon_for(x)), stream);
    engine.set_state(x);
    const Advance status = engine.advance(dt, dW);

    StepOutcome out;
    out.state = engine.state();
    out.substeps = engine.substeps();
    out.elapsed = engine.elapsed();
    if (status == Advance::Failed)
        out.status = StepStatus::Failure;
    else if (engine.any_hit()) {
        out.status = StepStatus::Hit;
        out.hit_root = engine.record(0).hit_root;
    }
    return out;
}

PathRecord simulate_path(std::span<const double> x0, const Potential& p, const SimConfig& cfg,
                         BrownianStream& stream)
{
    if (x0.size() != p.dim())
        throw std::invalid_argument("simulate_path: x0 has wrong dimension");
    DunklDynamics dyn(p);
    return std::move(integrate(dyn, x0, cfg, cfg.hit_epsilon_for(x0), stream).front());
}

PathRecord simulate_bessel(double y0, double k0, double scale, const SimConfig& cfg,
                           BrownianStream& stream)
{
    if (!(y0 > 0.0))
        throw std::invalid_argument("simulate_bessel: y0 must be > 0");
    BesselDynamics dyn(k0, scale);
    const Vec x0{y0};
    return std::move(integrate(dyn, x0, cfg, cfg.hit_epsilon_for(x0), stream).front());
}

CoupledPaths simulate_coupled_comparison(std::span<const double> x0, std::size_t j, double y0,
                                         const Potential& p, const SimConfig& cfg,
                                         BrownianStream& stream)
{
    if (x0.size() != p.dim())
        throw std::invalid_argument("simulate_coupled_comparison: x0 has wrong dimension");
    CoupledDynamics dyn(p, j);
    const double margin0 = dot(p.system().simple(j), x0);
    if (!(margin0 > 0.0))
        throw std::invalid_argument("simulate_coupled_comparison: <alpha0, x0> must be > 0");
    if (!(y0 >= margin0))
        throw std::invalid_argument("simulate_coupled_comparison: y0 must be >= <alpha0, x0>");
    Vec start(x0.begin(), x0.end());
    start.push_back(y0);
    auto recs = integrate(dyn, start, cfg, cfg.hit_epsilon_for(x0), stream);
    return {std::move(recs[0]), std::move(recs[1]), p.system().simple(j)};
}

}  // namespace dunkl
