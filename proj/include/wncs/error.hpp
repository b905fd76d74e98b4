#pragma once
#include <stdexcept>
#include <string>

namespace wncs {

// Error taxonomy maps onto CLI exit codes: config 4, infeasible/domain 2, numerical 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct InfeasibleError : Error {
    using Error::Error;
};

struct NumericsError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace wncs
