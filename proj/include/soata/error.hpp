#pragma once

#include <stdexcept>
#include <string>

namespace soata {

// Base of everything the library throws on bad input or broken invariants.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed document (not JSON, empty file, unreadable file).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed JSON that does not match the expected layout.
class SchemaError : public Error {
public:
    using Error::Error;
};

// A cross-reference names an id that is not declared.
class ReferenceError : public Error {
public:
    ReferenceError(std::string id, const std::string& what)
        : Error(what), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

// A model that fails validation was handed to an operation requiring a valid one.
class InvalidModelError : public Error {
public:
    using Error::Error;
};

// Declared hazard ASIL disagrees with the computed one.
class AsilMismatchError : public Error {
public:
    using Error::Error;
};

// The exhaustive oracle exceeded its node budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Engine and oracle disagree, or a derived artifact breaks its own contract.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace soata
