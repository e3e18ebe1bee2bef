#include "dtnsim/error.hpp"

namespace dtnsim {

namespace {

const char* parse_kind_name(ParseError::Kind kind)
{
    switch (kind) {
    case ParseError::Kind::MalformedLine: return "MalformedLine";
    case ParseError::Kind::InvertedInterval: return "InvertedInterval";
    case ParseError::Kind::SelfContact: return "SelfContact";
    case ParseError::Kind::EventBeyondDuration: return "EventBeyondDuration";
    case ParseError::Kind::WrongArity: return "WrongArity";
    case ParseError::Kind::NonBinaryValue: return "NonBinaryValue";
    case ParseError::Kind::DuplicateNode: return "DuplicateNode";
    }
    return "ParseError";
}

std::string parse_message(ParseError::Kind kind, std::size_t value, const std::string& detail)
{
    std::string msg = parse_kind_name(kind);
    msg += '(' + std::to_string(value) + ')';
    if (!detail.empty())
        msg += ": " + detail;
    return msg;
}

} // namespace

ParseError::ParseError(Kind kind, std::size_t value, const std::string& detail)
    : Error(parse_message(kind, value, detail)), kind_(kind), value_(value)
{
}

InvalidParams::InvalidParams(std::string field, const std::string& why)
    : Error("InvalidParams(" + field + ")" + (why.empty() ? "" : ": " + why)), field_(std::move(field))
{
}

ClusteringError::ClusteringError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

RoutingError::RoutingError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

MetricsError::MetricsError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

IoError::IoError(const std::string& path) : Error("IoFailure(" + path + ")"), path_(path) {}

ConfigError::ConfigError(Kind kind, std::string name, const std::string& what)
    : Error(what), kind_(kind), name_(std::move(name))
{
}

} // namespace dtnsim
