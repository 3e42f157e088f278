#ifndef SKG_HARNESS_HPP
#define SKG_HARNESS_HPP

#include <string>
#include <vector>

#include "skg/config.hpp"

namespace skg {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RunReport {
    bool pass = false;
    std::vector<CheckResult> checks;
    std::vector<std::string> artifacts;  // file names inside out_dir
    double wall_time_s = 0.0;
};

// Execute the configured experiment: writes the CSV/JSON/SVG artifacts into
// cfg.out_dir (atomically, summary.json last) and returns the check results.
// ConfigError/NumericError propagate to the caller.
RunReport run(const RunConfig& cfg);

}  // namespace skg

#endif
