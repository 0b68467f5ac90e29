#pragma once

#include <stdexcept>
#include <string>

namespace specgraph {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric or structural argument is outside its documented range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// The input carries no usable content (blank image, empty skeleton).
class ContentError : public Error {
public:
    using Error::Error;
};

/// Inputs disagree with each other (e.g. an interest point off the skeleton).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// An edge or node pair shares coordinates, so a distance would be zero.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// A caller violated a precondition (dimension mismatch, asymmetric matrix).
class ContractError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

/// Dataset-level problem: too few samples, unknown labels, bad manifest.
class DataError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents. The message always names the file.
class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace specgraph
