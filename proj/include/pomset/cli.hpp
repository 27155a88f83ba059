#pragma once
// Command-line front end. Exit status: 0 positive answer, 1 negative answer,
// 2 usage or input error, 3 budget exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace pomset {

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace pomset
