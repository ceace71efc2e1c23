#ifndef DSCF_CLI_HPP
#define DSCF_CLI_HPP

namespace dscf {

/// Full command-line front end. Returns the process exit status:
/// 0 success, 1 usage error, 2 data or solver error.
int cli_main(int argc, char** argv);

}  // namespace dscf

#endif  // DSCF_CLI_HPP
