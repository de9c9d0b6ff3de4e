#pragma once

#include <string>
#include <vector>

namespace fcast::cli {

/// Exit codes are a stable scripting contract:
///   0 success, 2 config error, 3 data error, 4 model/numerical error,
///   5 transport error.
enum ExitCode {
    kExitOk = 0,
    kExitConfig = 2,
    kExitData = 3,
    kExitModel = 4,
    kExitTransport = 5,
};

int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace fcast::cli
