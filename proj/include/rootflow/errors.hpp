#pragma once

#include <stdexcept>
#include <string>

namespace rootflow {

// Violated operation precondition or invalid domain object.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A measure that cannot support the requested operation (all mass at zero).
class degenerate_measure_error : public domain_error {
public:
    using domain_error::domain_error;
};

// Malformed configuration or input document.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An iterative solve failed. Carries the offending bracket or worst residual.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double lo, double hi)
        : std::runtime_error(what), bracket_lo_(lo), bracket_hi_(hi), has_bracket_(true) {}
    explicit numerical_error(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    bool has_bracket() const { return has_bracket_; }
    double bracket_lo() const { return bracket_lo_; }
    double bracket_hi() const { return bracket_hi_; }
    double residual() const { return residual_; }

private:
    double bracket_lo_ = 0.0;
    double bracket_hi_ = 0.0;
    double residual_ = 0.0;
    bool has_bracket_ = false;
};

} // namespace rootflow
