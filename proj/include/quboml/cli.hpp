#ifndef QUBOML_CLI_HPP
#define QUBOML_CLI_HPP

namespace quboml {

// Dispatches the `features`, `instances`, `cluster`, `sweep`, and `solve`
// subcommands. Returns 0 on success, 1 on usage errors, 2 on data errors.
int run(int argc, const char* const* argv);

}  // namespace quboml

#endif
