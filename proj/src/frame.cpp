#include "finsler/vector_field.hpp"

#include "finsler/error.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

namespace {

std::vector<double> jet_values(const std::vector<taylor_jet>& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& j : v) {
        out.push_back(j.value());
    }
    return out;
}

std::vector<taylor_jet> first_order(const std::vector<taylor_jet>& v)
{
    std::vector<taylor_jet> out;
    out.reserve(v.size());
    for (const auto& j : v) {
        out.push_back(j.truncated(1));
    }
    return out;
}

} // namespace

frame<double> value_frame(const local_jets& jets, const phase_point& p)
{
    if (jets.order < 4) {
        throw order_exceeded_error("a frame needs the connection, i.e. jets of order >= 4");
    }
    frame<double> fr;
    fr.dim = jets.dim;
    fr.x = p.x;
    fr.y = p.y;
    fr.f2 = jets.f2.value();
    fr.y_low = jet_values(jets.y_low);
    fr.g = jet_values(jets.g);
    fr.g_inv = jet_values(jets.g_inv);
    fr.n = jet_values(jets.n);
    return fr;
}

frame<double> frame_at(const finsler_spec& spec, const phase_point& p)
{
    return value_frame(compute_local_jets(spec, p, 4), p);
}

frame<taylor_jet> jet_frame(const local_jets& jets, const phase_point& p)
{
    if (jets.order < 5) {
        throw order_exceeded_error("a jet frame needs first derivatives of the connection, i.e. jets of order >= 5");
    }
    const int m = jets.dim;
    frame<taylor_jet> fr;
    fr.dim = m;
    for (int i = 0; i < m; ++i) {
        fr.x.push_back(taylor_jet::variable(2 * m, 1, i, p.x[i]));
        fr.y.push_back(taylor_jet::variable(2 * m, 1, m + i, p.y[i]));
    }
    fr.f2 = jets.f2.truncated(1);
    fr.y_low = first_order(jets.y_low);
    fr.g = first_order(jets.g);
    fr.g_inv = first_order(jets.g_inv);
    fr.n = first_order(jets.n);
    return fr;
}

frame<taylor_jet> jet_frame_at(const finsler_spec& spec, const phase_point& p)
{
    return jet_frame(compute_local_jets(spec, p, 5), p);
}

std::string adapted_name(int m, int index)
{
    return (index < m ? "delta_" : "ddot_") + std::to_string(index % m);
}

vector_field adapted_field(int m, int index)
{
    if (index < 0 || index >= 2 * m) {
        throw std::out_of_range("adapted frame index out of range");
    }
    if (index < m) {
        return make_field(adapted_name(m, index), [index](const auto& fr) { return delta_x(fr, index); });
    }
    return make_field(adapted_name(m, index), [i = index - m](const auto& fr) { return d_y(fr, i); });
}

vector_field psi_of(const vector_field& x)
{
    return make_field("Psi(" + x.name + ")", [x](const auto& fr) { return apply_psi(fr, x(fr)); });
}

vector_field phi_of(const vector_field& x)
{
    return make_field("phi(" + x.name + ")", [x](const auto& fr) { return apply_phi(fr, x(fr)); });
}

vector_field psi_bar_of(const vector_field& x, const deformation_coefficients& d)
{
    return make_field("Psi_bar(" + x.name + ")", [x, d](const auto& fr) { return apply_psi_bar(fr, d, x(fr)); });
}

vector_field add(const vector_field& a, const vector_field& b)
{
    return make_field(a.name + "+" + b.name, [a, b](const auto& fr) {
        auto out = a(fr);
        const auto rhs = b(fr);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += rhs[i];
        }
        return out;
    });
}

vector_field subtract(const vector_field& a, const vector_field& b)
{
    return make_field(a.name + "-" + b.name, [a, b](const auto& fr) {
        auto out = a(fr);
        const auto rhs = b(fr);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] -= rhs[i];
        }
        return out;
    });
}

std::string to_string(bracket_path path)
{
    switch (path) {
    case bracket_path::jet:
        return "jet";
    case bracket_path::finite_difference:
        return "finite-difference";
    case bracket_path::structure:
        return "structure";
    }
    return "unknown";
}

frame_stencil make_stencil(const finsler_spec& spec, const phase_point& p, double rel_step)
{
    frame_stencil st;
    st.center = frame_at(spec, p);
    const auto base = p.coordinates();
    for (std::size_t c = 0; c < base.size(); ++c) {
        const double h = rel_step * std::max(1.0, std::abs(base[c]));
        auto up = base;
        auto down = base;
        up[c] += h;
        down[c] -= h;
        st.plus.push_back(frame_at(spec, phase_point::from_coordinates(up)));
        st.minus.push_back(frame_at(spec, phase_point::from_coordinates(down)));
        st.step.push_back(h);
    }
    return st;
}

field_vector<double> bracket_jet(const vector_field& x, const vector_field& y, const frame<taylor_jet>& fr)
{
    const auto xv = x(fr);
    const auto yv = y(fr);
    const std::size_t n = xv.size();
    field_vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            s += xv[a].value() * yv[k].first_partial(static_cast<int>(a)) -
                 yv[a].value() * xv[k].first_partial(static_cast<int>(a));
        }
        out[k] = s;
    }
    return out;
}

field_vector<double> bracket_fd(const vector_field& x, const vector_field& y, const frame_stencil& st)
{
    const auto xv = x(st.center);
    const auto yv = y(st.center);
    const std::size_t n = xv.size();
    field_vector<double> out(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto xp = x(st.plus[a]);
        const auto xm = x(st.minus[a]);
        const auto yp = y(st.plus[a]);
        const auto ym = y(st.minus[a]);
        const double inv = 1.0 / (2.0 * st.step[a]);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] += xv[a] * (yp[k] - ym[k]) * inv - yv[a] * (xp[k] - xm[k]) * inv;
        }
    }
    return out;
}

double derivative_jet(const vector_field& x, const scalar_field& f, const frame<taylor_jet>& fr)
{
    const auto xv = x(fr);
    const auto fv = f(fr);
    double s = 0.0;
    for (std::size_t a = 0; a < xv.size(); ++a) {
        s += xv[a].value() * fv.first_partial(static_cast<int>(a));
    }
    return s;
}

double derivative_fd(const vector_field& x, const scalar_field& f, const frame_stencil& st)
{
    const auto xv = x(st.center);
    double s = 0.0;
    for (std::size_t a = 0; a < xv.size(); ++a) {
        s += xv[a] * (f(st.plus[a]) - f(st.minus[a])) / (2.0 * st.step[a]);
    }
    return s;
}

field_vector<double> structure_bracket(const point_geometry& geo, int a, int b)
{
    const int m = geo.dim;
    if (a < 0 || b < 0 || a >= 2 * m || b >= 2 * m) {
        throw std::out_of_range("adapted frame index out of range");
    }
    field_vector<double> out(2 * m, 0.0);
    const bool ha = a < m;
    const bool hb = b < m;
    if (ha && hb) {
        for (int i = 0; i < m; ++i) {
            out[m + i] = geo.r(i, a, b);
        }
    } else if (ha) {
        for (int i = 0; i < m; ++i) {
            out[m + i] = geo.dn_dy(i, a, b - m);
        }
    } else if (hb) {
        for (int i = 0; i < m; ++i) {
            out[m + i] = -geo.dn_dy(i, b, a - m);
        }
    }
    return out;
}

point_context::point_context(const finsler_spec& spec, const phase_point& p, bool with_stencil)
    : spec_(spec), geo_(evaluate_point(spec, p)), values_(value_frame(geo_.jets, p)), jets_(jet_frame(geo_.jets, p))
{
    if (with_stencil) {
        stencil_ = make_stencil(spec, p);
    }
}

const frame_stencil& point_context::stencil() const
{
    if (!stencil_) {
        throw std::logic_error("finite-difference path requested on a context built without a stencil");
    }
    return *stencil_;
}

field_vector<double> point_context::bracket(const vector_field& x, const vector_field& y, bracket_path path) const
{
    switch (path) {
    case bracket_path::jet:
        return bracket_jet(x, y, jets_);
    case bracket_path::finite_difference:
        return bracket_fd(x, y, stencil());
    case bracket_path::structure:
        break;
    }
    throw std::invalid_argument("the structure path only brackets adapted frame fields");
}

double point_context::derivative(const vector_field& x, const scalar_field& f, bracket_path path) const
{
    switch (path) {
    case bracket_path::jet:
        return derivative_jet(x, f, jets_);
    case bracket_path::finite_difference:
        return derivative_fd(x, f, stencil());
    case bracket_path::structure:
        break;
    }
    throw std::invalid_argument("the structure path has no directional derivative");
}

field_vector<double> point_context::adapted_bracket(int a, int b, bracket_path path) const
{
    if (path == bracket_path::structure) {
        return structure_bracket(geo_, a, b);
    }
    return bracket(adapted_field(dim(), a), adapted_field(dim(), b), path);
}

} // namespace finsler
