#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geoweb {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// jets
class DomainError : public Error { public: using Error::Error; };
class MixedContext : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };
class OrderExhausted : public Error { public: using Error::Error; };

// web geometry
class DegenerateWebPoint : public Error { public: using Error::Error; };
class CoincidentInvariants : public DegenerateWebPoint { public: using DegenerateWebPoint::DegenerateWebPoint; };
class ZeroForm : public Error { public: using Error::Error; };
class StepTooLarge : public Error { public: using Error::Error; };

// input
class SchemaError : public Error { public: using Error::Error; };

/// Expression errors carry the byte offset into the source text.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class SyntaxError : public ParseError { public: using ParseError::ParseError; };
class UnknownIdentifier : public ParseError { public: using ParseError::ParseError; };
class ArityError : public ParseError { public: using ParseError::ParseError; };
class VariableOutOfRange : public ParseError { public: using ParseError::ParseError; };

} // namespace geoweb
