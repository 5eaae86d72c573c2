#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geoweb {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,            ///< success; for check/linearize: geodesic / linearizable
    kExitInputError = 1,    ///< bad flags, unreadable or invalid web file
    kExitNegative = 2,      ///< not geodesic / not linearizable
    kExitInconclusive = 3,
};

/// Runs one command line (without the program name). The report goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace geoweb
