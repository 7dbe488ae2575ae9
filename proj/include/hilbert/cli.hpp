#pragma once

namespace hilbert {

// Full command-line front end.  Returns the process exit code: 0 when the
// requested operation ran and passed, 1 when it ran but a verdict failed,
// 2 on usage or input errors.
int run_cli(int argc, const char* const* argv);

}  // namespace hilbert
