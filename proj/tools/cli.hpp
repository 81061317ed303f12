#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace closure::cli {

enum Exit { Ok = 0, False = 1, Usage = 2, Budget = 3 };

// args excludes the program name. Solutions go to out, one per line and
// flushed as they are produced; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace closure::cli
