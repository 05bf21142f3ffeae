#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "twistlab/rings/laurent.hpp"

namespace twistlab::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kEmpty = 2, kPartial = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// 3*t^4 - 9*t^3 + 11*t^2 - 9*t + 3; parse_laurent reads it back.
std::string pretty(const LaurentPoly& p);

}  // namespace twistlab::cli
