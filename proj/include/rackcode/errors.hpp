#pragma once

#include <stdexcept>
#include <string>

namespace rackcode {

// Domain error hierarchy. Every failure mode a caller can act on has its
// own type; messages carry the offending values.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPrimeModulus : public Error {
public:
    explicit NonPrimeModulus(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// A span/row-space enumeration would exceed the configured cap.
class SpanTooLarge : public Error {
public:
    explicit SpanTooLarge(const std::string& what) : Error(what) {}
};

class CodebookTooLarge : public Error {
public:
    explicit CodebookTooLarge(const std::string& what) : Error(what) {}
};

// Linear system has no solution.
class Inconsistent : public Error {
public:
    explicit Inconsistent(const std::string& what) : Error(what) {}
};

// No surviving repair group exists inside the rack.
class NoLocalGroup : public Error {
public:
    explicit NoLocalGroup(const std::string& what) : Error(what) {}
};

class Unrepairable : public Error {
public:
    explicit Unrepairable(const std::string& what) : Error(what) {}
};

class MissingHelperSymbol : public Error {
public:
    explicit MissingHelperSymbol(const std::string& what) : Error(what) {}
};

// The transform input was not a valid code enumerator.
class NonIntegerDual : public Error {
public:
    explicit NonIntegerDual(const std::string& what) : Error(what) {}
};

class ProblemTooLarge : public Error {
public:
    explicit ProblemTooLarge(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace rackcode
