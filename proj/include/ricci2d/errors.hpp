#pragma once

#include <stdexcept>
#include <string>

namespace ricci2d {

// Precondition violated by a caller-supplied value (bad grid, t <= 0, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A conformal factor that is not strictly positive somewhere.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mollifier narrower than the grid can resolve.
class UnderResolved : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class NewtonFailure : public std::runtime_error {
public:
    NewtonFailure(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// Malformed input document (config, trajectory CSV, tensor file).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ricci2d
