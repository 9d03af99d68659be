#ifndef LACUNA_ERROR_HPP
#define LACUNA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lacuna
{

// Machine-readable failure classes. The CLI maps these onto exit codes.
enum class ErrorCode {
    parse = 2,
    numeric = 3,
    hypothesis = 4,
};

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept
    {
        return code_;
    }

private:
    ErrorCode code_;
};

// Malformed input: JSON, polynomial strings, expressions.
class ParseError : public Error
{
public:
    explicit ParseError(const std::string &what) : Error(ErrorCode::parse, what) {}
};

// Argument outside the domain of an operation (pole, branch cut, zero divisor).
class DomainError : public Error
{
public:
    explicit DomainError(const std::string &what) : Error(ErrorCode::numeric, what) {}
};

// Enclosures too wide to decide; the caller may retry at higher precision.
class PrecisionError : public Error
{
public:
    explicit PrecisionError(const std::string &what) : Error(ErrorCode::numeric, what) {}
};

// A mathematical hypothesis required downstream does not hold.
class HypothesisError : public Error
{
public:
    explicit HypothesisError(const std::string &what) : Error(ErrorCode::hypothesis, what) {}
};

} // namespace lacuna

#endif
