#pragma once

// Vector and scalar fields on the slit tangent bundle and their brackets.
//
// A field is one generic callable evaluated both on frame<double> and on
// frame<taylor_jet>. Three independent bracket paths:
//   jet:               exact first derivatives from order-1 jets;
//   finite_difference: central differences over a stencil of frames;
//   structure:         closed forms for pairs of adapted frame fields.

#include "finsler/frame.hpp"

#include <functional>
#include <optional>
#include <string>

namespace finsler {

struct vector_field {
    std::string name;
    std::function<field_vector<double>(const frame<double>&)> on_values;
    std::function<field_vector<taylor_jet>(const frame<taylor_jet>&)> on_jets;

    field_vector<double> operator()(const frame<double>& fr) const { return on_values(fr); }
    field_vector<taylor_jet> operator()(const frame<taylor_jet>& fr) const { return on_jets(fr); }
};

struct scalar_field {
    std::string name;
    std::function<double(const frame<double>&)> on_values;
    std::function<taylor_jet(const frame<taylor_jet>&)> on_jets;

    double operator()(const frame<double>& fr) const { return on_values(fr); }
    taylor_jet operator()(const frame<taylor_jet>& fr) const { return on_jets(fr); }
};

template <class F>
vector_field make_field(std::string name, F f)
{
    return {std::move(name), f, f};
}

template <class F>
scalar_field make_scalar(std::string name, F f)
{
    return {std::move(name), f, f};
}

// Adapted frame fields: index i < m is delta_i, index m + i is ddot_i.
vector_field adapted_field(int m, int index);
std::string adapted_name(int m, int index);

vector_field psi_of(const vector_field& x);
vector_field phi_of(const vector_field& x);
vector_field psi_bar_of(const vector_field& x, const deformation_coefficients& d);
vector_field add(const vector_field& a, const vector_field& b);
vector_field subtract(const vector_field& a, const vector_field& b);

enum class bracket_path { jet, finite_difference, structure };

std::string to_string(bracket_path path);

// Frames at p +/- h e_c for every coordinate c, h = rel_step * max(1, |p_c|).
struct frame_stencil {
    frame<double> center;
    std::vector<frame<double>> plus;
    std::vector<frame<double>> minus;
    std::vector<double> step;
};

inline constexpr double default_fd_step = 1e-5;

frame_stencil make_stencil(const finsler_spec& spec, const phase_point& p, double rel_step = default_fd_step);

field_vector<double> bracket_jet(const vector_field& x, const vector_field& y, const frame<taylor_jet>& fr);
field_vector<double> bracket_fd(const vector_field& x, const vector_field& y, const frame_stencil& st);
double derivative_jet(const vector_field& x, const scalar_field& f, const frame<taylor_jet>& fr);
double derivative_fd(const vector_field& x, const scalar_field& f, const frame_stencil& st);

// [X_a, X_b] for adapted frame fields:
//   [delta_j, delta_k] = R^i_jk ddot_i,  [delta_j, ddot_k] = dN^i_j/dy^k ddot_i,
//   [ddot_j, ddot_k] = 0.
field_vector<double> structure_bracket(const point_geometry& geo, int a, int b);

// Everything needed to evaluate fields and brackets at one point.
class point_context {
public:
    point_context(const finsler_spec& spec, const phase_point& p, bool with_stencil = false);

    const finsler_spec& spec() const noexcept { return spec_; }
    const phase_point& point() const noexcept { return geo_.point; }
    int dim() const noexcept { return geo_.dim; }
    const point_geometry& geometry() const noexcept { return geo_; }
    const frame<double>& values() const noexcept { return values_; }
    const frame<taylor_jet>& jets() const noexcept { return jets_; }
    bool has_stencil() const noexcept { return stencil_.has_value(); }
    const frame_stencil& stencil() const;

    field_vector<double> eval(const vector_field& x) const { return x(values_); }
    double eval(const scalar_field& f) const { return f(values_); }

    // The structure path is only defined for adapted frame fields; use
    // adapted_bracket for it.
    field_vector<double> bracket(const vector_field& x, const vector_field& y, bracket_path path) const;
    double derivative(const vector_field& x, const scalar_field& f, bracket_path path) const;
    field_vector<double> adapted_bracket(int a, int b, bracket_path path) const;

private:
    finsler_spec spec_;
    point_geometry geo_;
    frame<double> values_;
    frame<taylor_jet> jets_;
    std::optional<frame_stencil> stencil_;
};

} // namespace finsler
