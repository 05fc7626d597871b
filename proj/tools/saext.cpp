// saext <suite> --config <path> [--out <dir>] [--format json|csv|text] [--workers N]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <saext/saext.hpp>

int main(int argc, char** argv) {
    CLI::App app{"Self-adjoint extension experiments"};
    std::string suite, config_path, out_dir, format;
    std::size_t workers = 0;
    std::vector<std::string> suites = saext::suite_names();
    suites.push_back("all");
    app.add_option("suite", suite, "Suite to run")->required()->check(CLI::IsMember(suites));
    app.add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--format", format, "Output format (overrides the config)")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--workers", workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        auto config = saext::parse_config(buf.str());
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!format.empty()) config.format = format;
        if (workers > 0) config.workers = workers;

        auto report = saext::execute_experiment(config, suite);
        auto const files = saext::emit_report(report, config.format, config.out_dir, saext::utc_stamp());
        std::cout << saext::text_summary(report);
        for (auto const& f : files) std::cout << "wrote " << f << '\n';
        return report.all_pass() ? 0 : 1;
    } catch (saext::ConfigError const& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
