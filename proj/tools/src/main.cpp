#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "drinfeld/cli/commands.hpp"

using namespace drinfeld;
using namespace drinfeld::cli;

int main(int argc, char** argv) {
    CLI::App app{"Tensor powers of rank-1 Drinfeld modules over elliptic curves: shtukas, Anderson modules, "
                 "Exp/Log coefficients, periods and the identity registry."};
    std::string config_path, cmd = "verify", cache_dir;
    int n = 0, uprec = 0, terms = -1;
    bool json = false;
    app.add_option("--config", config_path, "job configuration file")->required()->check(CLI::ExistingFile);
    app.add_option("--cmd", cmd, "command to run")->check(CLI::IsMember(command_names()));
    app.add_option("--n", n, "override the dimension n")->check(CLI::PositiveNumber);
    app.add_option("--uprec", uprec, "override u_prec")->check(CLI::PositiveNumber);
    app.add_option("--terms", terms, "override the number of Exp/Log terms J")->check(CLI::NonNegativeNumber);
    app.add_option("--cache", cache_dir, "cache directory (empty disables the cache)");
    app.add_flag("--json", json, "print the report as JSON");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_invalid_input;
    }

    JobConfig cfg;
    try {
        std::ifstream in(config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
        if (n > 0) {
            if (n > cfg.n_max) throw InvalidInput("--n " + std::to_string(n) + " exceeds n_max = " + std::to_string(cfg.n_max));
            cfg.n = n;
        }
        if (uprec > 0) cfg.policy.u_prec = uprec;
        if (terms >= 0) cfg.policy.exp_terms = terms;
        if (app.count("--cache")) cfg.cache_dir = cache_dir;
        cfg.policy.validate();
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid_input;
    }

    const Report r = run_command(cfg, cmd);
    std::cout << (json ? render_json(r) : render_text(r));
    return r.exit_code;
}
