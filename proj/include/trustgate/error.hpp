#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trustgate {

enum class Errc {
    EmptyLedger,
    InvalidWeight,
    InvalidParams,
    InvalidThresholds,
    RemovedPrincipal,
    CorruptSnapshot,
    MalformedEnvelope,
    SealViolation,
    IncompleteTrace,
    MalformedTrace,
    UnknownEndpoint,
    Busy,
    InvalidArgument,
    InvalidScenario,
};

std::string_view to_string(Errc code);

// All library errors carry a code so callers (the CLI in particular) can map
// them onto exit statuses without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace trustgate
