#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strip {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical constant or algorithm parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// An evaluation point lies outside the domain of the operation (t < 0, x outside [0,l]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input data: non-finite samples, bad node layout, too few samples.
class InputError : public Error {
public:
    using Error::Error;
};

/// Series tolerance cannot be met within the mode cap.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double best_tail)
        : Error(what), best_tail_(best_tail) {}
    double best_tail() const noexcept { return best_tail_; }

private:
    double best_tail_;
};

/// Quadrature did not reach its target; carries the last error estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double estimate)
        : Error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// NaN or overflow appeared in an iterate.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A user-supplied source term failed to evaluate.
class SourceError : public Error {
public:
    using Error::Error;
};

/// The finite-difference inner iteration diverged at a time step.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs the sink for soft warnings; returns the previous one. The default writes to std::clog.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

/// Shortest round-trip text of v, for messages.
std::string number_text(double v);

}  // namespace strip
