// Command-line driver: one subcommand per experiment.
//
//   l2lab <experiment> --config <file> [--out <dir>] [--threads <n>]
//
// Exit status 0 when every assertion holds, 2 on an assertion failure,
// 3 when the configuration (or the complex it names) is unusable.

#include "l2lab/errors.hpp"
#include "l2lab/lab.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

constexpr int kExitAssertion = 2;
constexpr int kExitConfig = 3;

struct Options {
    std::string config;
    std::string out;
    int threads = 1;
};

int run(const std::string& experiment, const Options& opts) {
    auto config = l2lab::load_config(opts.config);
    config.threads = opts.threads;
    if (!opts.out.empty()) config.output_dir = opts.out;
    else if (const char* env = std::getenv("L2LAB_OUTPUT_DIR")) config.output_dir = env;

    auto result = l2lab::run_experiment(experiment, config);
    auto written = l2lab::write_result(result, config.output_dir);
    std::cout << l2lab::render_report(result);
    for (const auto& p : written) std::cout << "wrote " << p.string() << "\n";
    return result.passed() ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"l2lab: finite-section experiments on amenable covers"};
    app.require_subcommand(1);
    Options opts;
    std::string chosen;
    for (const auto& name : l2lab::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", opts.config, "experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output directory (overrides config and L2LAB_OUTPUT_DIR)");
        sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->callback([&chosen, name] { chosen = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        return run(chosen, opts);
    } catch (const l2lab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
    } catch (const l2lab::ParseError& e) {
        std::cerr << "complex file error: " << e.what() << "\n";
    } catch (const l2lab::ValidationError& e) {
        std::cerr << "invalid complex: " << e.what() << "\n";
    } catch (const l2lab::UnsupportedOracleError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
    } catch (const l2lab::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
