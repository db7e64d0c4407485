#pragma once

#include <stdexcept>
#include <string>

namespace vpmcf {

/// Invalid input or configuration: rejected before any state is touched.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Runtime numerical failure (degenerate state, root-solve breakdown, ...).
/// The CLI maps this to exit code 3. `step_index` is -1 when the failure is
/// not tied to a particular time step.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, long step_index = -1)
        : std::runtime_error(what), step_index_(step_index) {}

    long step_index() const noexcept { return step_index_; }

private:
    long step_index_;
};

} // namespace vpmcf
