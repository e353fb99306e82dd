#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circdesc::cli
{

/*! \brief Runs one `circdesc` invocation.
 *
 * `args` excludes the program name. Returns the process exit status: 0 on
 * success, 1 when mcsp-verify rejects, 2 on any error (reported on `err` as
 * `error: <code>: <detail>`).
 */
int run( std::vector<std::string> const& args, std::ostream& out, std::ostream& err );

} // namespace circdesc::cli
