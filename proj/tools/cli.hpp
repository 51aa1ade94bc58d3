#pragma once

#include <ostream>

namespace sdbotics::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kConnectivity = 2 };

/// Entry point of the `sdbotics` tool; streams are injectable for tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdbotics::cli
