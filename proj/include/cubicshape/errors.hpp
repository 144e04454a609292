#pragma once

#include <stdexcept>
#include <string>

namespace cubicshape {

// Error taxonomy. The CLI maps these onto exit codes.

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ArithmeticOverflow : std::overflow_error {
    using std::overflow_error::overflow_error;
};

struct DegenerateForm : std::domain_error {
    using std::domain_error::domain_error;
};

struct ReducibleForm : std::domain_error {
    using std::domain_error::domain_error;
};

struct RootFindingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// resource limits: factoring size, scan size, enumeration interrupted
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// cache missing, malformed, or too small for the request
struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cubicshape
