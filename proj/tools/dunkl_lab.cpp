#include <iostream>

#include "CLI11.hpp"

#include "dunkl/config.hpp"
#include "dunkl/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo laboratory for radial Dunkl processes"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> paths;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value config file (default: validate)");
    app.add_option("--seed", seed, "master seed, overrides the config");
    app.add_option("--out", out, "output directory");
    app.add_option("--paths", paths, "number of paths");
    app.add_flag("--quiet", quiet, "no summary lines");
    CLI11_PARSE(app, argc, argv);

    try {
        dunkl::RunConfig config = config_path.empty() ? dunkl::RunConfig{} : dunkl::load_config(config_path);
        if (seed)
            config.sim.master_seed = *seed;
        if (out)
            config.out = *out;
        if (paths)
            config.sim.n_paths = *paths;
        config.validate();
        return dunkl::run(config, std::cout, quiet);
    } catch (const std::exception& e) {
        std::cerr << "dunkl_lab: " << e.what() << '\n';
        return 2;
    }
}
