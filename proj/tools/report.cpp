#include "report.hpp"

#include "frontlab/mesh.hpp"

namespace frontlab::cli {

using mesh::format_double;

void Report::at_most(const std::string& name, double value, double tolerance) {
    checks_.push_back({name, format_double(value) + " <= " + format_double(tolerance), value <= tolerance});
}

void Report::above(const std::string& name, double value, double threshold) {
    checks_.push_back({name, format_double(value) + " > " + format_double(threshold), value > threshold});
}

void Report::expect(const std::string& name, bool ok, const std::string& detail) {
    checks_.push_back({name, detail, ok});
}

void Report::info(const std::string& name, const std::string& detail) {
    checks_.push_back({name, detail, true, true});
}

bool Report::passed() const {
    for (const Check& c : checks_)
        if (!c.pass) return false;
    return true;
}

void Report::print(std::ostream& os) const {
    for (const Check& c : checks_) {
        if (c.informational)
            os << "  " << c.name << ": " << c.detail << '\n';
        else
            os << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
    }
}

}  // namespace frontlab::cli
