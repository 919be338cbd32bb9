#pragma once

#include <stdexcept>

namespace gridmap {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a domain invariant (empty hostname, lat out of range...).
class ValidationError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// The on-disk store could not be read or written.
class StoreError : public Error {
public:
    using Error::Error;
};

/// portal.json carries a schema version this build does not understand.
class VersionError : public StoreError {
public:
    using StoreError::StoreError;
};

}  // namespace gridmap
