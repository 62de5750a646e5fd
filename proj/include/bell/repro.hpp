#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bell {

struct ReproOptions {
    int threads = 0;
    std::uint64_t seed = 20240601;
    int restarts = 50;
};

struct UnknownScenario : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& scenario_names();

// writes <outdir>/<name>.json plus one <name>_<curve>.tsv per curve; human summary goes to log
bool run_scenario(const std::string& name, const std::string& outdir, std::ostream& log, const ReproOptions& opt = {});

// status of one tabulated quantum value against a see-saw estimate
enum class QStatus { NoTarget, Match, AbovePrinted, BelowPrinted };
QStatus compare_q(double found, double printed, int decimals, bool has_target);
const char* qstatus_name(QStatus s);

}  // namespace bell
