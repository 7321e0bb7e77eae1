#pragma once

#include <stdexcept>
#include <string>

namespace cvxeps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OppositeInfinities : Error {
    OppositeInfinities() : Error("(+inf) + (-inf) is undefined") {}
};

struct DimensionMismatch : Error {
    DimensionMismatch() : Error("dimension mismatch") {}
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct UnsupportedDomainShape : Error {
    explicit UnsupportedDomainShape(const std::string& what) : Error(what) {}
};

struct NotASolution : Error {
    explicit NotASolution(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace cvxeps
