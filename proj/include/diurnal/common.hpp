#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace diurnal {

/// Number of 15-minute bins in a day.
inline constexpr std::size_t kBins = 96;
inline constexpr double kBinHours = 0.25;

/// Malformed or unreadable input. Maps to CLI exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Data that cannot support the requested analysis (empty users, constant
/// samples, ...). Maps to exit code 3 in strict mode.
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Maps to exit code 4.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Shortest round-trippable decimal form; used by every emitter so output
/// bytes depend only on values.
std::string format_number(double v);

}  // namespace diurnal
