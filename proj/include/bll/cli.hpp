#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bll::cli {

/// `args` excludes the program name. Returns 0 on success, 1 when a checked
/// hypothesis fails, 2 on invalid input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace bll::cli
