#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qfreud::cli {

struct RunConfig {
    std::string command;
    std::string q = "0.5";
    int precision_bits = 0;  // 0: derived from q and n_max
    std::string trunc_tol = "1e-40";
    int n_max = 30;
    std::vector<std::string> shifts{"1"};
    std::string format = "csv";
    std::string out;  // empty: stdout
    std::uint64_t seed = 1;

    // Throws ConfigError on anything a module would reject.
    void validate() const;
    // flat key=value lines, readable by --config
    std::string to_kv() const;

    bool operator==(const RunConfig&) const = default;
};

extern const char* const kCommands[7];

struct Check {
    std::string name;
    std::string value;
    std::string threshold;
    bool pass = false;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<Check> checks;
    std::string error;  // set on numeric failure

    bool passed() const;
};

// Parses argv (and any --config file) into a RunConfig. Throws ConfigError, or
// returns false when the caller should exit 0 (--help, --version).
bool parse_args(int argc, const char* const* argv, RunConfig& cfg, std::ostream& msg);

Report run(const RunConfig& cfg);

void write_csv(const Report& r, std::ostream& os);
void write_json(const Report& r, std::ostream& os);

// Full pipeline: exit code 0 pass, 1 numeric failure, 2 config error.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfreud::cli
