#pragma once

// Catalog of Finsler fundamental functions and the fundamental tensor.
//
// Every family exposes F^2 as a template over the scalar type, so the same
// expression is evaluated in plain doubles and in jet arithmetic.

#include "finsler/jet.hpp"
#include "finsler/phase_point.hpp"
#include "finsler/report.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace finsler {

enum class family {
    euclidean,
    riemannian_space_form,
    riemannian_general,
    randers,
    locally_minkowski_randers,
};

std::string to_string(family f);
family family_from_string(const std::string& name);
bool is_riemannian(family f) noexcept;

struct finsler_spec {
    std::string name;
    family kind = family::euclidean;
    int dim = 2;
    // Sectional curvature c of the space form (stereographic chart for c > 0,
    // Poincare ball for c < 0).
    double curvature = 0.0;
    // Randers one-form b_i (constant).
    std::vector<double> b;
    // Conformal factor exp(2 phi(x)), phi(x) = a.x + q/2 |x|^2.
    std::vector<double> conformal_gradient;
    double conformal_quadratic = 0.0;
    // riemannian_general: g = exp(2 phi) I + shear * x x^T.
    double shear = 0.0;
    // locally_minkowski_randers: alpha^2 = sum_i anisotropy_i (y^i)^2.
    std::vector<double> anisotropy;
    // Ball chart |x| < chart_radius.
    double chart_radius = 1.0;
};

// Throws config_error when the spec breaks its invariants (m >= 2, parameter
// sizes, ||b||_alpha < 1 on the chart).
void validate_spec(const finsler_spec& spec);

// Throws slit_violation_error / chart_domain_error.
void validate_point(const finsler_spec& spec, const phase_point& p);

// Named catalog entries: euclidean, sphere, poincare, conformal, randers, minkowski-randers.
std::vector<std::string> catalog_names();
finsler_spec catalog_entry(const std::string& name, int dim);
// One entry per family, as used by the "all catalog entries" checks.
std::vector<finsler_spec> family_catalog(int dim);

namespace detail {

template <class S>
S dot(std::span<const S> a, std::span<const S> b)
{
    S out = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        out += a[i] * b[i];
    }
    return out;
}

// phi(x) = a.x + q/2 |x|^2.
template <class S>
S conformal_exponent(const finsler_spec& spec, std::span<const S> x)
{
    S phi = x[0] * 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!spec.conformal_gradient.empty()) {
            phi += spec.conformal_gradient[i] * x[i];
        }
        phi += 0.5 * spec.conformal_quadratic * (x[i] * x[i]);
    }
    return phi;
}

template <class S>
S space_form_factor(const finsler_spec& spec, std::span<const S> x)
{
    const S denom = 1.0 + spec.curvature * dot(x, x);
    return 4.0 / (denom * denom);
}

} // namespace detail

// F^2(x, y). S is double or taylor_jet.
template <class S>
S fundamental_function_squared(const finsler_spec& spec, std::span<const S> x, std::span<const S> y)
{
    using std::exp;
    using std::sqrt;
    switch (spec.kind) {
    case family::euclidean:
        return detail::dot(y, y);
    case family::riemannian_space_form:
        return detail::space_form_factor(spec, x) * detail::dot(y, y);
    case family::riemannian_general: {
        const S xy = detail::dot(x, y);
        return exp(2.0 * detail::conformal_exponent(spec, x)) * detail::dot(y, y) + spec.shear * (xy * xy);
    }
    case family::randers: {
        const S alpha = exp(detail::conformal_exponent(spec, x)) * sqrt(detail::dot(y, y));
        S beta = y[0] * spec.b[0];
        for (std::size_t i = 1; i < y.size(); ++i) {
            beta += spec.b[i] * y[i];
        }
        const S f = alpha + beta;
        return f * f;
    }
    case family::locally_minkowski_randers: {
        S alpha_sq = spec.anisotropy[0] * (y[0] * y[0]);
        S beta = spec.b[0] * y[0];
        for (std::size_t i = 1; i < y.size(); ++i) {
            alpha_sq += spec.anisotropy[i] * (y[i] * y[i]);
            beta += spec.b[i] * y[i];
        }
        const S f = sqrt(alpha_sq) + beta;
        return f * f;
    }
    }
    return detail::dot(y, y);
}

// Riemannian metric matrix g_ij(x), row-major. Only for riemannian families.
template <class S>
std::vector<S> riemannian_metric(const finsler_spec& spec, std::span<const S> x)
{
    using std::exp;
    const auto m = x.size();
    const S zero = x[0] * 0.0;
    std::vector<S> g(m * m, zero);
    switch (spec.kind) {
    case family::euclidean:
        for (std::size_t i = 0; i < m; ++i) {
            g[i * m + i] = zero + 1.0;
        }
        break;
    case family::riemannian_space_form: {
        const S factor = detail::space_form_factor(spec, x);
        for (std::size_t i = 0; i < m; ++i) {
            g[i * m + i] = factor;
        }
        break;
    }
    case family::riemannian_general: {
        const S factor = exp(2.0 * detail::conformal_exponent(spec, x));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                g[i * m + j] = spec.shear * (x[i] * x[j]);
            }
            g[i * m + i] += factor;
        }
        break;
    }
    default:
        break;
    }
    return g;
}

double evaluate_F2(const finsler_spec& spec, const phase_point& p);

// F^2 as a jet_function over the 2m chart coordinates.
jet_function f2_function(const finsler_spec& spec);

struct metric_value {
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    Eigen::VectorXd y_low;
    double f2 = 0.0;
};

// g_ij = 1/2 d^2 F^2 / dy^i dy^j from a degree-2 jet. Throws f3_violation_error
// when g is not positive definite.
metric_value fundamental_tensor(const finsler_spec& spec, const phase_point& p);

// Homogeneity, Euler identity and positive-definiteness margin at p.
check_report validate_finsler_axioms(const finsler_spec& spec, const phase_point& p, double lambda,
                                     double tolerance = 1e-10);

} // namespace finsler
