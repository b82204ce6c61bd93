#ifndef METAVIEW_CLI_HPP_
#define METAVIEW_CLI_HPP_

namespace metaview {

/// Entry point behind the `metaview` binary. Exit codes: 0 success,
/// 1 module failure, 2 configuration / usage errors.
int cli_main(int argc, const char* const* argv);

} // namespace metaview

#endif // METAVIEW_CLI_HPP_
