#ifndef FDRKIT_ERRORS_HPP
#define FDRKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fdrkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleError : Error {
    using Error::Error;
};
struct SelfLoopError : Error {
    using Error::Error;
};
struct UnknownNodeError : Error {
    using Error::Error;
};
struct DuplicateArcError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct SameNodeError : Error {
    using Error::Error;
};
struct NotReducibleError : Error {
    using Error::Error;
};
struct CapExceededError : Error {
    using Error::Error;
};
struct ZeroProbabilityError : Error {
    using Error::Error;
};
struct GraphMismatchError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace fdrkit

#endif
