#pragma once

#include <stdexcept>
#include <string>

namespace ag {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Unrecognised or malformed file header (bad magic, bad sizeof_hdr, byte-swapped).
class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedDatatype : public Error {
public:
    using Error::Error;
};

/// Header is fine but the payload is short or otherwise unreadable.
class CorruptFile : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ag
