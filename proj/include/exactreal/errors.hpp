#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace exactreal {

// Byte range into the original expression text. start <= end.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const SourceSpan&) const = default;
};

class EraError : public std::runtime_error {
  public:
    EraError(std::string msg, SourceSpan span)
        : std::runtime_error(std::move(msg)), span_(span) {}

    SourceSpan span() const { return span_; }

  private:
    SourceSpan span_;
};

// Undefined operation: ln of a nonpositive value, sqrt of a negative value,
// inverse of an exact zero, zero denominator.
class DomainError : public EraError {
  public:
    using EraError::EraError;
};

// Malformed expression text.
class ParseError : public EraError {
  public:
    using EraError::EraError;
};

// A refinement loop exceeded its cap (or a sum exceeded the term budget):
// the requested precision cannot be delivered. Typically the shadow of an
// exact zero, which the (m,n,p) representation cannot hold.
class PrecisionDivergence : public EraError {
  public:
    using EraError::EraError;
};

}  // namespace exactreal
