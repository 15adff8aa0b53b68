#pragma once

#include <stdexcept>
#include <string>

namespace subml {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Constellation order not covered by the square-QAM / PAM / BPSK formulas.
class UnsupportedOrder : public Error {
public:
    using Error::Error;
};

// O(K^2) pair scan refused because the candidate set is too large.
class CapExceeded : public Error {
public:
    using Error::Error;
};

class EmptyPairs : public Error {
public:
    using Error::Error;
};

// MIMO objective evaluated where one of its terms diverges.
class SingularPoint : public Error {
public:
    using Error::Error;
};

// Requested error probability cannot be reached on the selected branch.
class Infeasible : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

// Config file or flag value that cannot be interpreted. `where` names the
// offending line/field so the message can point at it.
class ConfigError : public Error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : Error(where + ": " + what), where_(where) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace subml
