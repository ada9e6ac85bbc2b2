#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

/// Bad input to an operation (wrong sizes, out-of-range parameters, violated preconditions).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced non-finite values or could not proceed for numerical reasons.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the projection onto S^1 when the mollified field comes too close to zero.
class ProjectionRefused : public NumericalFailure {
public:
    ProjectionRefused(const std::string& what, int i, int j, double modulus)
        : NumericalFailure(what), i_(i), j_(j), modulus_(modulus) {}

    int i() const { return i_; }
    int j() const { return j_; }
    double modulus() const { return modulus_; }

private:
    int i_;
    int j_;
    double modulus_;
};

}  // namespace aniso
