#ifndef QM_CLI_HPP
#define QM_CLI_HPP

#include <iosfwd>

namespace qm::cli {

// Dispatches one qm invocation. Exit 0 on success (Unknown verdicts are
// answers), 1 on domain errors, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// The worked-example battery behind `qm examples --paper`; prints one line
// per example and returns whether all of them reproduced.
bool run_example_battery(std::ostream& out);

} // namespace qm::cli

#endif // QM_CLI_HPP
