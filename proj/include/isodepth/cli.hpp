#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isodepth::cli {

// Runs one CLI invocation. `args` excludes the program name. Data goes to
// `out` (or the file given via --output); diagnostics and the resolved seed
// go to `err`. Returns 0 on success, 2 on usage errors, 1 on runtime errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isodepth::cli
