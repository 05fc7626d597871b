#pragma once

#include <stdexcept>
#include <string>

namespace saext {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a structural precondition (non-Hermitian, non-unitary, singular, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Invalid model or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation called outside its contract (e.g. Im lambda <= 0 where C+ is required).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A numerical diagnostic exceeded its tolerance.
class DiagnosticFailure : public Error {
public:
    using Error::Error;
};

/// lambda lies (numerically) in the spectrum of the extension fixed by the boundary functional.
class SpectrumHit : public StructuralError {
public:
    SpectrumHit(std::string const& what, std::size_t block)
        : StructuralError(what), block_(block) {}
    std::size_t block() const { return block_; }

private:
    std::size_t block_;
};

} // namespace saext
