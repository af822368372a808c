#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dunkl/root_system.hpp"
#include "dunkl/sde.hpp"

namespace dunkl {

enum class Command { Simulate, Hitting, Compare, Occupation, Moments, Race, Validate };
enum class Model { Dunkl, Laguerre };

std::string to_string(Command c);
std::string to_string(Model m);

/// Raised for any config problem; key() names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Flat key = value document, one key per line, '#' starts a comment, lists
/// in brackets: k = [0.5, 1].
///
/// Optional keys that are absent stay unset so that render() writes back
/// exactly the keys that were given, plus every SimConfig field.
struct RunConfig {
    Command command = Command::Validate;
    Model model = Model::Dunkl;
    std::optional<Family> family;
    std::optional<int> rank;
    /// One value per orbit, in orbit-label order.
    std::vector<double> k;
    /// Starting point; eigenvalues for model = laguerre.
    Vec x0;
    SimConfig sim;
    std::string out = "out";
    /// Simple-root positions, counted from 0.
    std::optional<std::size_t> alpha;
    std::optional<std::size_t> alpha2;
    std::optional<double> y0;
    std::vector<double> epsilons;
    /// auto, hit or no_hit.
    std::optional<std::string> expect;
    std::optional<double> threshold;
    std::optional<double> beta;
    std::optional<double> delta;

    /// Cross-key checks. Throws ConfigError.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string render(const RunConfig& config);

/// Keys accepted by parse_config, in render order.
const std::vector<std::string>& config_keys();

}  // namespace dunkl
