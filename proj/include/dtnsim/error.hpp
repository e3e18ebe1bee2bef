#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtnsim {

/// Base for every error raised by the simulator library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed trace or interest-profile input.
class ParseError : public Error {
public:
    enum class Kind {
        MalformedLine,
        InvertedInterval,
        SelfContact,
        EventBeyondDuration,
        WrongArity,
        NonBinaryValue,
        DuplicateNode,
    };

    /// `value` is the 1-based line number, except for DuplicateNode where it
    /// is the offending node id.
    ParseError(Kind kind, std::size_t value, const std::string& detail = {});

    Kind kind() const noexcept { return kind_; }
    std::size_t value() const noexcept { return value_; }
    std::size_t line() const noexcept { return value_; }

private:
    Kind kind_;
    std::size_t value_;
};

/// A parameter struct failed validation; `field()` names the culprit.
class InvalidParams : public Error {
public:
    explicit InvalidParams(std::string field, const std::string& why = {});
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ClusteringError : public Error {
public:
    enum class Kind {
        LengthMismatch,
        UnassignedPoint,
        TooFewDistinctPoints,
        EmptyInput,
        CategoryOutOfRange,
        InvalidArgument,
    };
    ClusteringError(Kind kind, const std::string& what);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class RoutingError : public Error {
public:
    enum class Kind { DuplicateMessage, CategoryOutOfRange, InvalidArgument };
    RoutingError(Kind kind, const std::string& what);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Inconsistent scenario handed to the engine.
class ScenarioError : public Error {
public:
    using Error::Error;
};

class MetricsError : public Error {
public:
    enum class Kind { NoMessages, NothingDelivered, EmptyNetwork, Malformed };
    MetricsError(Kind kind, const std::string& what);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& path);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ConfigError : public Error {
public:
    enum class Kind { UnknownKey, MissingRequired, ConflictingSources, BadValue, Io };
    ConfigError(Kind kind, std::string name, const std::string& what);
    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

private:
    Kind kind_;
    std::string name_;
};

} // namespace dtnsim
