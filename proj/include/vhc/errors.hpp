#pragma once

#include <stdexcept>
#include <string>

namespace vhc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegeneratePoint : Error {
    using Error::Error;
};

struct ZeroTotalCirculation : Error {
    using Error::Error;
};

struct CoincidentPoints : Error {
    using Error::Error;
};

struct NewtonDiverged : Error {
    using Error::Error;
};

struct DegenerateConfiguration : Error {
    using Error::Error;
};

struct UnsupportedPair : Error {
    using Error::Error;
};

struct FixedPointDiverged : Error {
    using Error::Error;
};

struct NonDecayingInput : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace vhc
