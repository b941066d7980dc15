#pragma once

// Connection data at a point, generic over the scalar type. frame<double>
// holds values; frame<taylor_jet> holds order-1 jets so that vector fields
// built from it carry their first derivatives.
//
// Vector fields are coordinate vectors of length 2m: entries 0..m-1 are the
// d/dx^i components and m..2m-1 the d/dy^i components.

#include "finsler/connection.hpp"
#include "finsler/jet.hpp"

#include <vector>

namespace finsler {

template <class S>
struct frame {
    int dim = 0;
    std::vector<S> x;
    std::vector<S> y;
    S f2;
    std::vector<S> y_low;
    std::vector<S> g;      // row-major
    std::vector<S> g_inv;  // row-major
    std::vector<S> n;      // N^i_j at i*m + j

    const S& conn(int i, int j) const { return n[static_cast<std::size_t>(i) * dim + j]; }
    const S& metric(int i, int j) const { return g[static_cast<std::size_t>(i) * dim + j]; }
    S zero() const { return f2 * 0.0; }
};

// Needs jets of order >= 4.
frame<double> value_frame(const local_jets& jets, const phase_point& p);
frame<double> frame_at(const finsler_spec& spec, const phase_point& p);

// Needs jets of order >= 5; every entry is truncated to order 1.
frame<taylor_jet> jet_frame(const local_jets& jets, const phase_point& p);
frame<taylor_jet> jet_frame_at(const finsler_spec& spec, const phase_point& p);

template <class S>
using field_vector = std::vector<S>;

// Adapted components: horizontal part dx^i(X), vertical part dy^i + N^i_j dx^j.
template <class S>
field_vector<S> vertical_part(const frame<S>& fr, const field_vector<S>& v)
{
    const int m = fr.dim;
    field_vector<S> out;
    out.reserve(m);
    for (int i = 0; i < m; ++i) {
        S s = v[m + i];
        for (int j = 0; j < m; ++j) {
            s += fr.conn(i, j) * v[j];
        }
        out.push_back(s);
    }
    return out;
}

// Coordinate vector of sum h^i delta_i + u^i ddot_i.
template <class S>
field_vector<S> from_adapted(const frame<S>& fr, const field_vector<S>& h, const field_vector<S>& u)
{
    const int m = fr.dim;
    field_vector<S> out(2 * m, fr.zero());
    for (int i = 0; i < m; ++i) {
        out[i] = h[i];
        S s = u[i];
        for (int j = 0; j < m; ++j) {
            s -= fr.conn(i, j) * h[j];
        }
        out[m + i] = s;
    }
    return out;
}

template <class S>
field_vector<S> basis_vector(const frame<S>& fr, int i)
{
    field_vector<S> out(2 * fr.dim, fr.zero());
    out[i] += 1.0;
    return out;
}

// delta_i = d/dx^i - N^a_i d/dy^a
template <class S>
field_vector<S> delta_x(const frame<S>& fr, int i)
{
    auto out = basis_vector(fr, i);
    for (int a = 0; a < fr.dim; ++a) {
        out[fr.dim + a] = -fr.conn(a, i);
    }
    return out;
}

template <class S>
field_vector<S> d_y(const frame<S>& fr, int i)
{
    return basis_vector(fr, fr.dim + i);
}

// Geodesic spray S_F = y^i delta_i.
template <class S>
field_vector<S> spray(const frame<S>& fr)
{
    field_vector<S> h = fr.y;
    return from_adapted(fr, h, field_vector<S>(fr.dim, fr.zero()));
}

// Liouville field y^i ddot_i.
template <class S>
field_vector<S> liouville(const frame<S>& fr)
{
    return from_adapted(fr, field_vector<S>(fr.dim, fr.zero()), fr.y);
}

template <class S>
field_vector<S> combine(const field_vector<S>& a, const S& s, const field_vector<S>& b)
{
    auto out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] += s * b[i];
    }
    return out;
}

// h_i = delta_i - (y_i / F^2) S_F
template <class S>
field_vector<S> h_field(const frame<S>& fr, int i)
{
    return combine(delta_x(fr, i), -(fr.y_low[i] / fr.f2), spray(fr));
}

// v_i = ddot_i - (y_i / F^2) C
template <class S>
field_vector<S> v_field(const frame<S>& fr, int i)
{
    return combine(d_y(fr, i), -(fr.y_low[i] / fr.f2), liouville(fr));
}

// eta1(X) = y_i dx^i(X) / F^2, eta2(X) = y_i delta y^i(X) / F^2
template <class S>
S eta1(const frame<S>& fr, const field_vector<S>& v)
{
    S s = fr.zero();
    for (int i = 0; i < fr.dim; ++i) {
        s += fr.y_low[i] * v[i];
    }
    return s / fr.f2;
}

template <class S>
S eta2(const frame<S>& fr, const field_vector<S>& v)
{
    const auto u = vertical_part(fr, v);
    S s = fr.zero();
    for (int i = 0; i < fr.dim; ++i) {
        s += fr.y_low[i] * u[i];
    }
    return s / fr.f2;
}

// Psi(delta_i) = -ddot_i, Psi(ddot_i) = delta_i.
template <class S>
field_vector<S> apply_psi(const frame<S>& fr, const field_vector<S>& v)
{
    const int m = fr.dim;
    field_vector<S> h(v.begin(), v.begin() + m);
    for (auto& e : h) {
        e = -e;
    }
    return from_adapted(fr, vertical_part(fr, v), h);
}

// phi = Psi + eta1 C - eta2 S_F, i.e. Psi + xi2 (x) eta1 - xi1 (x) eta2.
template <class S>
field_vector<S> apply_phi(const frame<S>& fr, const field_vector<S>& v)
{
    auto out = apply_psi(fr, v);
    out = combine(out, eta1(fr, v), liouville(fr));
    out = combine(out, S(-eta2(fr, v)), spray(fr));
    return out;
}

// Deformation of Psi by G^a_j = delta/beta + v y^a y_j/(alpha beta) and
// H^a_j = beta delta + w y^a y_j, with v = v_tau/F^2 and w = w_tau/F^2:
// Psi_bar(delta_j) = -G^a_j ddot_a, Psi_bar(ddot_j) = H^a_j delta_a.
struct deformation_coefficients {
    double beta = 1.0;
    double alpha = 1.0;
    double v_tau = 0.0;
    double w_tau = 0.0;
};

// The inverse-pair choice: v = alpha (beta - 1)/tau, w = (1 - beta)/tau.
inline deformation_coefficients standard_deformation(double beta, double alpha = 1.0)
{
    return {beta, alpha, alpha * (beta - 1.0), 1.0 - beta};
}

template <class S>
field_vector<S> apply_psi_bar(const frame<S>& fr, const deformation_coefficients& d, const field_vector<S>& v)
{
    const int m = fr.dim;
    const auto u = vertical_part(fr, v);
    S y_dot_h = fr.zero();
    S y_dot_u = fr.zero();
    for (int i = 0; i < m; ++i) {
        y_dot_h += fr.y_low[i] * v[i];
        y_dot_u += fr.y_low[i] * u[i];
    }
    const S vg = (d.v_tau / (d.alpha * d.beta)) / fr.f2;
    const S wh = d.w_tau / fr.f2;
    field_vector<S> h_out;
    field_vector<S> v_out;
    for (int a = 0; a < m; ++a) {
        h_out.push_back(d.beta * u[a] + wh * fr.y[a] * y_dot_u);
        v_out.push_back(-(v[a] / d.beta + vg * fr.y[a] * y_dot_h));
    }
    return from_adapted(fr, h_out, v_out);
}

} // namespace finsler
