#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigdex {

/// Command-line front end. Returns 0 on success, 1 on usage errors, 2 on
/// data/format/range errors. All diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sigdex
