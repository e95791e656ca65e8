#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rasp {

/// Location of a construct in RASP source. Lines and columns are 1-based.
struct Span {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
    std::size_t length = 0;

    [[nodiscard]] std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Errors that carry a source location (lexing, parsing, lowering).
class SourceError : public Error {
public:
    SourceError(const std::string& what, Span span)
        : Error(span.line ? span.to_string() + ": " + what : what), span_(span) {}

    [[nodiscard]] const Span& span() const noexcept { return span_; }

private:
    Span span_;
};

class LexError : public SourceError {
public:
    using SourceError::SourceError;
};

class ParseError : public SourceError {
public:
    using SourceError::SourceError;
};

/// Name resolution and static-shape failures raised while lowering to the DAG.
class LowerError : public SourceError {
public:
    using SourceError::SourceError;
};

/// Raised while evaluating a node on a concrete input.
class EvalError : public Error {
public:
    using Error::Error;
};

class CoercionError : public EvalError {
public:
    using EvalError::EvalError;
};

/// Use of an extension operator (score / select_best) without enabling it.
class FeatureGateError : public EvalError {
public:
    using EvalError::EvalError;
};

}  // namespace rasp
