#pragma once

#include <string>
#include <vector>

namespace growthlift {

/// Exit codes: 0 success (eps_reached / eps_stop_triggered / all checks pass),
/// 1 usage or runtime error, 2 iteration budget exhausted.
int cli_main(const std::vector<std::string>& args);
int cli_main(int argc, const char* const* argv);

}  // namespace growthlift
