#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abho::cli {

// Exit codes: 0 success, 2 usage or invalid parameter, 3 numerical-domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace abho::cli
