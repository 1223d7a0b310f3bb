#pragma once

#include <stdexcept>
#include <string>

namespace ridgekit {

// Base class so callers can catch everything raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

class InadmissibleError : public Error {
public:
    using Error::Error;
};

class UnderResolvedError : public Error {
public:
    using Error::Error;
};

// Run configuration rejected before dispatch. The CLI maps it to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace ridgekit
