#pragma once

#include <stdexcept>
#include <string>

namespace lemlearn {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transient transport failure; the gateway retries these.
struct ProviderTransportError : ProviderError {
    using ProviderError::ProviderError;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroVector : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidK : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingPlaceholder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TagNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckerUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WorkspaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnverifiedCandidate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownLemma : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaVersionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExtractionArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NameMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SketchBudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lemlearn
