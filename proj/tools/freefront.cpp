// freefront <command> --config <path> [--out <dir>] [--threads N]

#include "freefront/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"freefront: predator-prey free-boundary lab"};
    app.set_version_flag("--version", FREEFRONT_VERSION);
    std::string command;
    std::string configPath;
    std::string outDir;
    int threads = 0;
    app.add_option("command", command,
                   "simulate | classify | sweep | semiwave | equilibrium | thresholds | compare")
        ->required();
    app.add_option("--config", configPath, "JSON run configuration")->required();
    app.add_option("--out", outDir, "output directory (overrides FREEFRONT_OUT and the config)");
    app.add_option("--threads", threads, "worker threads (overrides FREEFRONT_THREADS)")
        ->check(CLI::NonNegativeNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const auto cfg = freefront::loadConfig(configPath);
        if (freefront::toString(cfg.command) != command) {
            std::cerr << "error: command '" << command << "' does not match the config's command '"
                      << freefront::toString(cfg.command) << "'\n";
            return 1;
        }
        const int nThreads =
            freefront::resolveThreads(cfg, threads > 0 ? std::optional<int>(threads) : std::nullopt);
        const auto out =
            freefront::resolveOutput(cfg, outDir.empty() ? std::nullopt : std::optional(outDir));
        return freefront::runCommand(cfg, out, nThreads);
    } catch (const freefront::ConfigParseError& e) {
        std::cerr << "config error";
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        if (!e.field.empty()) std::cerr << " [" << e.field << "]";
        std::cerr << ": " << e.what() << '\n';
        return 1;
    } catch (const freefront::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return freefront::exitCodeFor(e.family());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
