// Acceptance runner: one PASS/FAIL line per criterion.
#include <iostream>

#include <CLI11.hpp>

#include "tracelab/acceptance.hpp"
#include "tracelab/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"tracelab acceptance criteria"};
    std::vector<int> ids;
    std::string thresholds;
    bool tamper = false;
    app.add_option("--criterion", ids, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, tracelab::kCriteria));
    app.add_option("--thresholds", thresholds, "threshold overrides, e.g. strict=10x");
    app.add_flag("--tamper-t0", tamper, "perturb the k = 10 plateau of T0 by 1%");
    CLI11_PARSE(app, argc, argv);

    tracelab::AcceptOptions o;
    o.tamper_t0 = tamper;
    try {
        if (!thresholds.empty()) o.thresholds = tracelab::parse_thresholds(thresholds);
    } catch (const tracelab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    bool all = true;
    for (const auto& r : tracelab::run_acceptance(ids, o)) {
        std::cout << tracelab::format_result(r) << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
