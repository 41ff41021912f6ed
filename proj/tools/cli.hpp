#pragma once

#include <iosfwd>

namespace allpay {

/// Runs one subcommand. Returns 0 on success, 1 on usage or validation
/// errors, 2 on numerical failures.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace allpay
