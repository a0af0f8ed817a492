#pragma once

// Pass/fail bookkeeping for the subcommands. Every check prints one line;
// the process exit code is 0 iff all of them pass.

#include <ostream>
#include <string>
#include <vector>

namespace frontlab::cli {

struct Check {
    std::string name;
    std::string detail;
    bool pass = true;
    bool informational = false;
};

class Report {
public:
    /// value <= tolerance (NaN fails).
    void at_most(const std::string& name, double value, double tolerance);
    /// value > threshold (NaN fails).
    void above(const std::string& name, double value, double threshold);
    void expect(const std::string& name, bool ok, const std::string& detail = {});
    void info(const std::string& name, const std::string& detail);

    bool passed() const;
    const std::vector<Check>& checks() const { return checks_; }
    void print(std::ostream& os) const;

private:
    std::vector<Check> checks_;
};

}  // namespace frontlab::cli
