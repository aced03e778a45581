#pragma once

#include <stdexcept>
#include <string>

namespace wardtrack {

// Process exit codes: 0 success, 1 usage, 2 bad data, 3 broken invariant.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const { return 2; }
};

// Malformed command line or unknown subcommand/flag value.
class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 1; }
};

// Unreadable or malformed input: missing files, parse failures, shape or
// extent violations, format_version mismatches.
class DataError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 2; }
};

// Internal consistency violation, e.g. a cyclic flow graph or two different
// action labels landing on the same track point.
class InvariantError : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 3; }
};

} // namespace wardtrack
