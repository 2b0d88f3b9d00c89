#ifndef QTG_CLI_HPP
#define QTG_CLI_HPP

#include <ostream>

namespace qtg {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 2; // --verify found a sub-optimal result
inline constexpr int kExitIo = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitBudget = 5;

/// Dispatches generate | simulate | estimate | benchmark. Results go to
/// `out`, diagnostics to `err`. argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

} // namespace qtg

#endif // QTG_CLI_HPP
