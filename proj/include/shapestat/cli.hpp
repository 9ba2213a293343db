#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shapestat {

/// Dispatches the command line (without the program name). Returns 0 on
/// success, 1 on domain errors, 2 on usage errors. Reports are written as
/// JSON envelopes to --out or to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shapestat
