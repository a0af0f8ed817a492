#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frontlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression source; `offset` is the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Division by (numerically) zero while evaluating an expression or formula.
/// `location` names the offending sub-expression.
class PoleSignal : public Error {
public:
    explicit PoleSignal(std::string location)
        : Error("pole in " + location), location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

#define FRONTLAB_DEFINE_ERROR(Name)      \
    class Name : public Error {          \
    public:                              \
        using Error::Error;              \
    };

FRONTLAB_DEFINE_ERROR(PreconditionError)
FRONTLAB_DEFINE_ERROR(DegenerateMetric)
FRONTLAB_DEFINE_ERROR(MetricSignatureError)
FRONTLAB_DEFINE_ERROR(SingularPointError)
FRONTLAB_DEFINE_ERROR(NotSingular)
FRONTLAB_DEFINE_ERROR(CMC1Unsupported)
FRONTLAB_DEFINE_ERROR(FlatUnsupported)
FRONTLAB_DEFINE_ERROR(FlatOnly)
FRONTLAB_DEFINE_ERROR(LoopThroughZero)
FRONTLAB_DEFINE_ERROR(SingularSetError)
FRONTLAB_DEFINE_ERROR(DegenerateLift)
FRONTLAB_DEFINE_ERROR(PoleOnPath)
FRONTLAB_DEFINE_ERROR(NonGenericPath)
FRONTLAB_DEFINE_ERROR(GridFailure)
FRONTLAB_DEFINE_ERROR(IoError)

#undef FRONTLAB_DEFINE_ERROR

}  // namespace frontlab
