#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hk::cli {

/// Exit codes: 0 success or pass, 2 a verdict failed, 1 error.
enum ExitCode : int { ok = 0, error = 1, verdict_failed = 2 };

/// args excludes the program name, e.g. {"verify", "--config", "demo.cfg", "--out", "run"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hk::cli
