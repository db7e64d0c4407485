#pragma once

namespace vpmcf {

/// CLI entry point (exposed for in-process testing).
/// Exit codes: 0 success, 2 validation failure, 3 runtime numerical failure.
int cli_main(int argc, const char* const* argv);

} // namespace vpmcf
