#pragma once

// Subcommand execution and CSV emission.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "scenario.hpp"
#include "spherent/dynamics.hpp"

namespace spherent::cli {

/// Physics failure, with the offending sweep point in the message; exit status 2.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  ///< extra metadata lines
};

/// `#`-prefixed scenario echo and notes, header row, data rows; '\n' endings.
void write_csv(std::ostream& out, const Scenario& s, const Table& t);

Table execute(const Scenario& s, unsigned threads);

/// Config text to CSV text.
std::string run_to_string(Command command, const std::string& config_text, unsigned threads,
                          const std::string& source = "<config>");

struct RunRequest {
    std::string command;
    std::string config_path;  ///< empty: figure presets only
    std::string out_path;     ///< empty: output.path from the config, else stdout
    unsigned threads = 1;
};

/// Returns the exit status: 0 success, 1 config error, 2 numerical failure.
int run(const RunRequest& req, std::ostream& out, std::ostream& err);

/// Coupling and drive of one entangle/dynamics point, in units of gamma32_aa.
struct PointSetup {
    CouplingParams params;
    DriveSpec drive;
};

/// Column documentation printed by --help.
std::string csv_schema_help();

}  // namespace spherent::cli
