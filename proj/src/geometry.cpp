#include "finsler/geometry.hpp"

#include "finsler/error.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

std::string to_string(family f)
{
    switch (f) {
    case family::euclidean:
        return "euclidean";
    case family::riemannian_space_form:
        return "riemannian-space-form";
    case family::riemannian_general:
        return "riemannian-general";
    case family::randers:
        return "randers";
    case family::locally_minkowski_randers:
        return "locally-minkowski-randers";
    }
    return "unknown";
}

family family_from_string(const std::string& name)
{
    for (auto f : {family::euclidean, family::riemannian_space_form, family::riemannian_general, family::randers,
                   family::locally_minkowski_randers}) {
        if (to_string(f) == name) {
            return f;
        }
    }
    throw config_error("unknown Finsler family: " + name);
}

bool is_riemannian(family f) noexcept
{
    return f == family::euclidean || f == family::riemannian_space_form || f == family::riemannian_general;
}

namespace {

double norm(const std::vector<double>& v)
{
    double s = 0.0;
    for (double e : v) {
        s += e * e;
    }
    return std::sqrt(s);
}

void require_size(const std::vector<double>& v, int dim, const char* what, bool allow_empty)
{
    if (allow_empty && v.empty()) {
        return;
    }
    if (static_cast<int>(v.size()) != dim) {
        throw config_error(std::string(what) + " must have one entry per dimension");
    }
}

} // namespace

void validate_spec(const finsler_spec& spec)
{
    if (spec.dim < 2) {
        throw config_error("dimension must be at least 2");
    }
    if (spec.dim > max_jet_variables / 2) {
        throw config_error("dimension too large for the jet engine");
    }
    if (!(spec.chart_radius > 0.0)) {
        throw config_error("chart radius must be positive");
    }
    require_size(spec.conformal_gradient, spec.dim, "conformal_gradient", true);
    switch (spec.kind) {
    case family::riemannian_space_form:
        if (spec.curvature < 0.0 && spec.chart_radius >= 1.0 / std::sqrt(-spec.curvature)) {
            throw config_error("Poincare chart radius must stay inside the ball of radius 1/sqrt|c|");
        }
        break;
    case family::riemannian_general:
        if (spec.shear < 0.0) {
            throw config_error("shear must be non-negative");
        }
        break;
    case family::randers: {
        require_size(spec.b, spec.dim, "b", false);
        // sup over the chart of exp(-phi) bounds ||b||_alpha / |b|.
        const double r = spec.chart_radius;
        const double decay = norm(spec.conformal_gradient) * r + std::max(0.0, -0.5 * spec.conformal_quadratic * r * r);
        if (norm(spec.b) * std::exp(decay) >= 1.0) {
            throw config_error("Randers one-form must satisfy ||b||_alpha < 1 on the chart");
        }
        break;
    }
    case family::locally_minkowski_randers: {
        require_size(spec.b, spec.dim, "b", false);
        require_size(spec.anisotropy, spec.dim, "anisotropy", false);
        double b_alpha_sq = 0.0;
        for (int i = 0; i < spec.dim; ++i) {
            if (!(spec.anisotropy[i] > 0.0)) {
                throw config_error("anisotropy entries must be positive");
            }
            b_alpha_sq += spec.b[i] * spec.b[i] / spec.anisotropy[i];
        }
        if (b_alpha_sq >= 1.0) {
            throw config_error("Randers one-form must satisfy ||b||_alpha < 1");
        }
        break;
    }
    case family::euclidean:
        break;
    }
}

void validate_point(const finsler_spec& spec, const phase_point& p)
{
    if (p.dim() != spec.dim || static_cast<int>(p.y.size()) != spec.dim) {
        throw chart_domain_error("point dimension does not match the spec");
    }
    if (norm(p.y) == 0.0) {
        throw slit_violation_error("y = 0 is not on the slit tangent bundle");
    }
    if (!(norm(p.x) < spec.chart_radius)) {
        throw chart_domain_error("x lies outside the chart ball");
    }
}

std::vector<std::string> catalog_names()
{
    return {"euclidean", "sphere", "poincare", "conformal", "randers", "minkowski-randers"};
}

finsler_spec catalog_entry(const std::string& name, int dim)
{
    finsler_spec spec;
    spec.name = name;
    spec.dim = dim;
    const auto pattern = [dim](std::initializer_list<double> values) {
        std::vector<double> v(values);
        v.resize(static_cast<std::size_t>(dim), 0.05);
        return v;
    };
    if (name == "euclidean") {
        spec.kind = family::euclidean;
    } else if (name == "sphere") {
        spec.kind = family::riemannian_space_form;
        spec.curvature = 1.0;
        spec.chart_radius = 1.0;
    } else if (name == "poincare") {
        spec.kind = family::riemannian_space_form;
        spec.curvature = -1.0;
        spec.chart_radius = 0.9;
    } else if (name == "conformal") {
        spec.kind = family::riemannian_general;
        spec.conformal_gradient = pattern({0.3, -0.2, 0.1});
        spec.conformal_quadratic = 0.4;
        spec.shear = 0.5;
    } else if (name == "randers") {
        spec.kind = family::randers;
        spec.b = pattern({0.2, 0.1, -0.05});
        spec.conformal_gradient = pattern({0.2, 0.1, -0.1});
        spec.conformal_quadratic = 0.3;
    } else if (name == "minkowski-randers") {
        spec.kind = family::locally_minkowski_randers;
        spec.b = pattern({0.3, -0.2, 0.1});
        spec.anisotropy = pattern({1.0, 1.5, 2.0});
        for (auto& a : spec.anisotropy) {
            a = std::max(a, 1.0);
        }
    } else {
        throw config_error("unknown catalog entry: " + name);
    }
    validate_spec(spec);
    return spec;
}

std::vector<finsler_spec> family_catalog(int dim)
{
    std::vector<finsler_spec> out;
    for (const char* name : {"euclidean", "sphere", "conformal", "randers", "minkowski-randers"}) {
        out.push_back(catalog_entry(name, dim));
    }
    return out;
}

double evaluate_F2(const finsler_spec& spec, const phase_point& p)
{
    validate_point(spec, p);
    const double f2 = fundamental_function_squared<double>(spec, p.x, p.y);
    if (!(f2 > 0.0)) {
        throw f3_violation_error("F^2 is not positive at the point", f2);
    }
    return f2;
}

jet_function f2_function(const finsler_spec& spec)
{
    return [spec](std::span<const taylor_jet> vars) {
        const auto m = vars.size() / 2;
        return fundamental_function_squared<taylor_jet>(spec, vars.first(m), vars.subspan(m));
    };
}

namespace {

struct metric_with_spectrum {
    metric_value value;
    double min_eigenvalue;
    double max_eigenvalue;
};

metric_with_spectrum metric_unchecked(const finsler_spec& spec, const phase_point& p)
{
    validate_point(spec, p);
    const int m = spec.dim;
    const auto f2 = jet_lift(f2_function(spec), p, 2);
    metric_with_spectrum out;
    auto& mv = out.value;
    mv.g.resize(m, m);
    mv.y_low.resize(m);
    mv.f2 = f2.value();
    std::vector<int> alpha(2 * m, 0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            std::fill(alpha.begin(), alpha.end(), 0);
            ++alpha[m + i];
            ++alpha[m + j];
            mv.g(i, j) = 0.5 * f2.partial(alpha);
        }
    }
    // y_i = g_ij y^j.
    for (int i = 0; i < m; ++i) {
        mv.y_low(i) = 0.0;
        for (int j = 0; j < m; ++j) {
            mv.y_low(i) += mv.g(i, j) * p.y[j];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mv.g, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.max_eigenvalue = eig.eigenvalues().maxCoeff();
    return out;
}

} // namespace

metric_value fundamental_tensor(const finsler_spec& spec, const phase_point& p)
{
    auto m = metric_unchecked(spec, p);
    if (!(m.min_eigenvalue > 0.0)) {
        throw f3_violation_error("fundamental tensor is not positive definite (smallest eigenvalue " +
                                     std::to_string(m.min_eigenvalue) + ")",
                                 m.min_eigenvalue);
    }
    m.value.g_inv = m.value.g.inverse();
    return m.value;
}

check_report validate_finsler_axioms(const finsler_spec& spec, const phase_point& p, double lambda, double tolerance)
{
    if (!(lambda > 0.0)) {
        throw error("homogeneity factor must be positive");
    }
    check_report report;
    const double f2 = fundamental_function_squared<double>(spec, p.x, p.y);
    std::vector<double> scaled(p.y);
    for (auto& v : scaled) {
        v *= lambda;
    }
    const double f2_scaled = fundamental_function_squared<double>(spec, p.x, scaled);
    // F = sqrt(F^2) with the sign of F^2 > 0 assumed; a non-positive F^2 shows up as NaN.
    const double f = std::sqrt(f2);
    const double f_scaled = std::sqrt(f2_scaled);
    report.add("finsler-homogeneity", std::abs(f_scaled - lambda * f) / (1.0 + lambda * f), tolerance);

    const auto m = metric_unchecked(spec, p);
    const double quad = m.value.y_low.dot(Eigen::Map<const Eigen::VectorXd>(p.y.data(), spec.dim));
    report.add("finsler-euler", std::abs(quad - f2) / (1.0 + std::abs(f2)), tolerance);

    // Margin is the negated, scale-free smallest eigenvalue: passes only when g is positive definite.
    const double scale = std::max(std::abs(m.max_eigenvalue), std::abs(m.min_eigenvalue));
    const double margin = scale > 0.0 ? m.min_eigenvalue / scale : 0.0;
    report.add(make_record("finsler-positive-definite", margin > 0.0 ? 0.0 : 1.0 - margin, tolerance));
    return report;
}

} // namespace finsler
