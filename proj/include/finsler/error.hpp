#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Base of every error raised by the library. The CLI maps these onto exit codes.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Division by a jet whose constant term vanishes.
class singular_evaluation_error : public error {
public:
    using error::error;
};

// Univariate function evaluated outside its domain (sqrt/log of a non-positive jet, ...).
class domain_error : public error {
public:
    using error::error;
};

class order_exceeded_error : public error {
public:
    using error::error;
};

class chart_domain_error : public error {
public:
    using error::error;
};

// y = 0: the point is not on the slit tangent bundle.
class slit_violation_error : public error {
public:
    using error::error;
};

class f3_violation_error : public error {
public:
    f3_violation_error(const std::string& what, double smallest_eigenvalue)
        : error(what), smallest_eigenvalue_(smallest_eigenvalue)
    {
    }

    double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

private:
    double smallest_eigenvalue_;
};

class unsupported_family_error : public error {
public:
    using error::error;
};

// beta <= 1/2 for the deformed structure.
class feasibility_error : public error {
public:
    using error::error;
};

class rank_error : public error {
public:
    using error::error;
};

class config_error : public error {
public:
    using error::error;
};

} // namespace finsler
