#include "dunkl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dunkl/io.hpp"

namespace dunkl {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const auto s = trim(v);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(out))
        throw ConfigError(key, "expected a number, got '" + v + "'");
    return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v)
{
    Int out = 0;
    const auto s = trim(v);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return out;
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    const auto s = trim(v);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw ConfigError(key, "expected a bracketed list, got '" + v + "'");
    std::vector<double> out;
    const auto body = trim(std::string_view(s).substr(1, s.size() - 2));
    if (body.empty())
        return out;
    std::stringstream ss(body);
    for (std::string item; std::getline(ss, item, ',');)
        out.push_back(to_double(key, item));
    return out;
}

Command to_command(const std::string& v)
{
    static const std::map<std::string, Command> names{
        {"simulate", Command::Simulate}, {"hitting", Command::Hitting},
        {"compare", Command::Compare},   {"occupation", Command::Occupation},
        {"moments", Command::Moments},   {"race", Command::Race},
        {"validate", Command::Validate}};
    auto it = names.find(v);
    if (it == names.end())
        throw ConfigError("command", "unknown command '" + v + "'");
    return it->second;
}

std::string list_text(const std::vector<double>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_double(v[i]);
    return s + "]";
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key + ": " + message), key_(std::move(key))
{
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Hitting: return "hitting";
    case Command::Compare: return "compare";
    case Command::Occupation: return "occupation";
    case Command::Moments: return "moments";
    case Command::Race: return "race";
    case Command::Validate: return "validate";
    }
    return "?";
}

std::string to_string(Model m) { return m == Model::Dunkl ? "dunkl" : "laguerre"; }

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys{
        "command", "model",   "family",        "rank",        "k",        "x0",
        "dt",      "horizon", "hit_epsilon",   "substep_max", "clip_fraction",
        "seed",    "paths",   "record_stride", "out",         "alpha",    "alpha2",
        "y0",      "epsilons", "expect",       "threshold",   "beta",     "delta"};
    return keys;
}

void RunConfig::validate() const
{
    const SimConfig& s = sim;
    if (!(s.dt > 0.0))
        throw ConfigError("dt", "must be > 0");
    if (!(s.horizon > 0.0))
        throw ConfigError("horizon", "must be > 0");
    if (s.dt > s.horizon)
        throw ConfigError("dt", "must not exceed horizon");
    if (s.hit_epsilon && !(*s.hit_epsilon > 0.0))
        throw ConfigError("hit_epsilon", "must be > 0");
    if (s.substep_max < 1 || s.substep_max > 60)
        throw ConfigError("substep_max", "must lie in [1, 60]");
    if (!(s.clip_fraction > 0.0 && s.clip_fraction < 1.0))
        throw ConfigError("clip_fraction", "must lie in (0, 1)");
    if (s.n_paths < 1)
        throw ConfigError("paths", "must be >= 1");
    if (s.record_stride < 1)
        throw ConfigError("record_stride", "must be >= 1");
    if (out.empty())
        throw ConfigError("out", "must not be empty");
    if (expect && *expect != "auto" && *expect != "hit" && *expect != "no_hit")
        throw ConfigError("expect", "must be auto, hit or no_hit");
    if (threshold && !(*threshold >= 0.0 && *threshold <= 1.0))
        throw ConfigError("threshold", "must lie in [0, 1]");
    for (double e : epsilons)
        if (!(e > 0.0))
            throw ConfigError("epsilons", "values must be > 0");

    auto require = [](bool present, const char* key, const std::string& why) {
        if (!present)
            throw ConfigError(key, "missing (" + why + ")");
    };
    const bool runs = command != Command::Validate;
    const std::string cmd = "required by " + to_string(command);

    if (model == Model::Laguerre) {
        if (command != Command::Simulate && command != Command::Moments)
            throw ConfigError("model", "laguerre supports only simulate and moments");
        if (family)
            throw ConfigError("family", "not used with model = laguerre");
        if (!k.empty())
            throw ConfigError("k", "not used with model = laguerre");
        const std::string why = "required by model = laguerre";
        require(rank.has_value(), "rank", why);
        require(beta.has_value(), "beta", why);
        require(delta.has_value(), "delta", why);
        require(!x0.empty(), "x0", why);
        if (*rank < 1)
            throw ConfigError("rank", "must be >= 1");
        if (!(*beta > 0.0))
            throw ConfigError("beta", "must be > 0");
        if (x0.size() != static_cast<std::size_t>(*rank))
            throw ConfigError("x0", "expected " + std::to_string(*rank) + " eigenvalues");
        for (std::size_t i = 0; i < x0.size(); ++i)
            if (!(x0[i] > 0.0) || (i + 1 < x0.size() && !(x0[i] > x0[i + 1])))
                throw ConfigError("x0", "eigenvalues must be positive and strictly decreasing");
        return;
    }

    if (beta)
        throw ConfigError("beta", "only used with model = laguerre");
    if (delta)
        throw ConfigError("delta", "only used with model = laguerre");
    const bool names_system = family || rank || !k.empty() || !x0.empty();
    if (!runs && !names_system)
        return;
    const std::string why = runs ? cmd : "needed to define the root system";
    require(family.has_value(), "family", why);
    require(rank.has_value(), "rank", why);
    require(!k.empty(), "k", why);
    RootSystem rs = [&] {
        try {
            return RootSystem::catalog(*family, *rank);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("rank", e.what());
        }
    }();
    if (k.size() != rs.orbit_count())
        throw ConfigError("k", std::to_string(rs.orbit_count()) + " orbits require " +
                                   std::to_string(rs.orbit_count()) + " values, got " +
                                   std::to_string(k.size()));
    for (double v : k)
        if (!(v >= 0.0))
            throw ConfigError("k", "multiplicities must be >= 0");
    if (runs)
        require(!x0.empty(), "x0", cmd);
    if (!x0.empty()) {
        if (x0.size() != rs.dim())
            throw ConfigError("x0", "expected " + std::to_string(rs.dim()) + " coordinates");
        if (!(ChamberPoint::at(rs, x0).min_margin() > 0.0))
            throw ConfigError("x0", "must lie in the open Weyl chamber");
    }

    auto check_simple = [&](const std::optional<std::size_t>& a, const char* key) {
        require(a.has_value(), key, cmd);
        if (*a >= rs.rank())
            throw ConfigError(key, "simple root position must be < " + std::to_string(rs.rank()));
    };
    switch (command) {
    case Command::Compare:
        check_simple(alpha, "alpha");
        if (y0 && !(*y0 >= dot(rs.simple(*alpha), x0)))
            throw ConfigError("y0", "must be >= <alpha, x0>");
        break;
    case Command::Race:
        check_simple(alpha, "alpha");
        check_simple(alpha2, "alpha2");
        if (*alpha == *alpha2)
            throw ConfigError("alpha2", "must differ from alpha");
        for (auto a : {*alpha, *alpha2})
            if (!(Multiplicity(k).of_root(rs, rs.simple_indices()[a]) < 0.5))
                throw ConfigError("k", "race needs multiplicities < 1/2 on both walls");
        break;
    case Command::Occupation:
        require(!epsilons.empty(), "epsilons", cmd);
        for (double v : k)
            if (!(v > 0.0))
                throw ConfigError("k", "occupation needs every multiplicity > 0");
        break;
    default: break;
    }
}

RunConfig parse_config(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::size_t lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(key, "unknown key");
        if (value.empty())
            throw ConfigError(key, "empty value");
        if (!kv.emplace(key, value).second)
            throw ConfigError(key, "given more than once");
    }

    RunConfig c;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("command"))
        c.command = to_command(*v);
    if (auto v = get("model")) {
        if (*v == "dunkl")
            c.model = Model::Dunkl;
        else if (*v == "laguerre")
            c.model = Model::Laguerre;
        else
            throw ConfigError("model", "must be dunkl or laguerre");
    }
    if (auto v = get("family")) {
        try {
            c.family = parse_family(*v);
        } catch (const std::invalid_argument&) {
            throw ConfigError("family", "must be A, B or rank_one, got '" + *v + "'");
        }
    }
    if (auto v = get("rank"))
        c.rank = to_int<int>("rank", *v);
    if (auto v = get("k"))
        c.k = to_list("k", *v);
    if (auto v = get("x0"))
        c.x0 = to_list("x0", *v);
    if (auto v = get("dt"))
        c.sim.dt = to_double("dt", *v);
    if (auto v = get("horizon"))
        c.sim.horizon = to_double("horizon", *v);
    if (auto v = get("hit_epsilon"))
        c.sim.hit_epsilon = to_double("hit_epsilon", *v);
    if (auto v = get("substep_max"))
        c.sim.substep_max = to_int<int>("substep_max", *v);
    if (auto v = get("clip_fraction"))
        c.sim.clip_fraction = to_double("clip_fraction", *v);
    if (auto v = get("seed"))
        c.sim.master_seed = to_int<std::uint64_t>("seed", *v);
    if (auto v = get("paths"))
        c.sim.n_paths = to_int<std::size_t>("paths", *v);
    if (auto v = get("record_stride"))
        c.sim.record_stride = to_int<std::size_t>("record_stride", *v);
    if (auto v = get("out"))
        c.out = *v;
    if (auto v = get("alpha"))
        c.alpha = to_int<std::size_t>("alpha", *v);
    if (auto v = get("alpha2"))
        c.alpha2 = to_int<std::size_t>("alpha2", *v);
    if (auto v = get("y0"))
        c.y0 = to_double("y0", *v);
    if (auto v = get("epsilons"))
        c.epsilons = to_list("epsilons", *v);
    if (auto v = get("expect"))
        c.expect = *v;
    if (auto v = get("threshold"))
        c.threshold = to_double("threshold", *v);
    if (auto v = get("beta"))
        c.beta = to_double("beta", *v);
    if (auto v = get("delta"))
        c.delta = to_double("delta", *v);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string render(const RunConfig& c)
{
    std::ostringstream out;
    auto line = [&](const char* key, const std::string& v) { out << key << " = " << v << '\n'; };
    line("command", to_string(c.command));
    line("model", to_string(c.model));
    if (c.family)
        line("family", to_string(*c.family));
    if (c.rank)
        line("rank", std::to_string(*c.rank));
    if (!c.k.empty())
        line("k", list_text(c.k));
    if (!c.x0.empty())
        line("x0", list_text(c.x0));
    line("dt", format_double(c.sim.dt));
    line("horizon", format_double(c.sim.horizon));
    if (c.sim.hit_epsilon)
        line("hit_epsilon", format_double(*c.sim.hit_epsilon));
    line("substep_max", std::to_string(c.sim.substep_max));
    line("clip_fraction", format_double(c.sim.clip_fraction));
    line("seed", std::to_string(c.sim.master_seed));
    line("paths", std::to_string(c.sim.n_paths));
    line("record_stride", std::to_string(c.sim.record_stride));
    line("out", c.out);
    if (c.alpha)
        line("alpha", std::to_string(*c.alpha));
    if (c.alpha2)
        line("alpha2", std::to_string(*c.alpha2));
    if (c.y0)
        line("y0", format_double(*c.y0));
    if (!c.epsilons.empty())
        line("epsilons", list_text(c.epsilons));
    if (c.expect)
        line("expect", *c.expect);
    if (c.threshold)
        line("threshold", format_double(*c.threshold));
    if (c.beta)
        line("beta", format_double(*c.beta));
    if (c.delta)
        line("delta", format_double(*c.delta));
    return out.str();
}

}  // namespace dunkl
