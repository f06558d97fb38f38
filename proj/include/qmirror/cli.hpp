#ifndef QMIRROR_CLI_HPP
#define QMIRROR_CLI_HPP

namespace qmirror {

// Entry point shared by the binary and the CLI tests. Exit codes: 0 success,
// 1 physics-check failure, 2 usage/config error.
int cli_main(int argc, const char* const* argv);

} // namespace qmirror

#endif
