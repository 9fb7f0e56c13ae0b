#pragma once

#include <stdexcept>
#include <string>

namespace galcur {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// cyclotomic layer
struct DivisionByZeroError : Error {
    using Error::Error;
};
struct ConductorLimitError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

// algebra layer
struct NotMultiplicativeError : Error {
    using Error::Error;
};
struct NotInvertibleError : Error {
    using Error::Error;
};
struct OrderCapError : Error {
    using Error::Error;
};

// generic precondition violations (bad rank, dimension mismatch, ...)
struct InvalidArgumentError : Error {
    using Error::Error;
};

// module labels violating the classification shape (zero weight, repeated fiber)
struct LabelShapeError : Error {
    using Error::Error;
};

// malformed config files / schema violations
struct ConfigError : Error {
    using Error::Error;
};

} // namespace galcur
