#pragma once

#include <iosfwd>

namespace essh::runner {

/// Entry point of the `essh` executable: `essh <kind> [--config PATH] [flags]`.
/// Flags override keys of the config file, which override built-in defaults.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace essh::runner
