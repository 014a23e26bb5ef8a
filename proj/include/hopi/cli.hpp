// Command-line front end. Exit codes: 0 bisimilar (or success), 1 not
// bisimilar, 2 error, 3 the two engines disagree.
#pragma once

#include <iosfwd>

namespace hopi::cli {

enum ExitCode : int { kEqual = 0, kDifferent = 1, kError = 2, kDisagreement = 3 };

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace hopi::cli
