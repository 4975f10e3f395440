// Error types shared by all unilab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace unilab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent input parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A requested range lies outside what the sieve machinery can provide.
class CoverageError : public Error {
public:
    using Error::Error;
};

// A direct evaluation would exceed its work budget; the message names the
// alternative route.
class BudgetError : public Error {
public:
    using Error::Error;
};

// An internal structural invariant was violated by the data (e.g. two prime
// pairs labelling the same graph edge).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// A fit had no usable input.
class EmptyFitError : public Error {
public:
    using Error::Error;
};

// Raised when a certified maximisation cannot reach its tolerance within the
// iteration cap. Carries the best point found so far.
class CertificationError : public Error {
public:
    CertificationError(const std::string& what, double best_alpha, double best_value,
                       double upper_bound)
        : Error(what), best_alpha_(best_alpha), best_value_(best_value),
          upper_bound_(upper_bound) {}

    double best_alpha() const noexcept { return best_alpha_; }
    double best_value() const noexcept { return best_value_; }
    double upper_bound() const noexcept { return upper_bound_; }

private:
    double best_alpha_;
    double best_value_;
    double upper_bound_;
};

}  // namespace unilab
