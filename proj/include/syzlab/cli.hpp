#pragma once

#include <iosfwd>

namespace syzlab::cli {

/// Exit status: 0 success, 1 verified failure, 2 usage or configuration
/// error, 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace syzlab::cli
