#include "finsler/nijenhuis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace finsler {

namespace {

field_vector<double> axpy(field_vector<double> a, double s, const field_vector<double>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += s * b[i];
    }
    return a;
}

double max_abs(const field_vector<double>& v)
{
    double out = 0.0;
    for (double e : v) {
        out = std::max(out, std::abs(e));
    }
    return out;
}

double max_diff(const field_vector<double>& a, const field_vector<double>& b)
{
    double out = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out = std::max(out, std::abs(a[i] - b[i]));
    }
    return out;
}

Eigen::VectorXd adapted_to_coords(const point_geometry& geo, const Eigen::VectorXd& h, const Eigen::VectorXd& u)
{
    const int m = geo.dim;
    Eigen::VectorXd out(2 * m);
    out.head(m) = h;
    out.tail(m) = u - geo.n * h;
    return out;
}

Eigen::VectorXd vertical_of(const point_geometry& geo, const Eigen::VectorXd& x)
{
    const int m = geo.dim;
    return x.tail(m) + geo.n * x.head(m);
}

std::string fixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

double tolerance_for(bracket_path path, double jet_tolerance, double bracket_tolerance)
{
    return path == bracket_path::finite_difference ? bracket_tolerance : jet_tolerance;
}

Eigen::VectorXd to_eigen(const field_vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

field_vector<double> from_eigen(const Eigen::VectorXd& v)
{
    return field_vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd curvature_contract(const point_geometry& geo, const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    const int m = geo.dim;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out(i) += geo.r(i, j, k) * a(j) * b(k);
            }
        }
    }
    return out;
}

double d_eta(const point_context& ctx, int a, const vector_field& x, const vector_field& y, bracket_path path)
{
    const auto br = ctx.bracket(x, y, path);
    const double eta_br = a == 1 ? eta1(ctx.values(), br) : eta2(ctx.values(), br);
    return 0.5 * (ctx.derivative(x, eta_of(a, y), path) - ctx.derivative(y, eta_of(a, x), path) - eta_br);
}

field_vector<double> A_tensor(const point_context& ctx, const vector_field& x, const vector_field& y,
                              bracket_path path)
{
    auto out = ctx.bracket(x, psi_of(y), path);
    return axpy(std::move(out), 1.0, ctx.bracket(psi_of(x), y, path));
}

field_vector<double> B_tensor(const point_context& ctx, const vector_field& x, const vector_field& y,
                              bracket_path path)
{
    auto out = ctx.bracket(psi_of(x), psi_of(y), path);
    return axpy(std::move(out), -1.0, ctx.bracket(x, y, path));
}

field_vector<double> A_frame(const point_context& ctx, int a, int b, bracket_path path)
{
    const int m = ctx.dim();
    if (path != bracket_path::structure) {
        return A_tensor(ctx, adapted_field(m, a), adapted_field(m, b), path);
    }
    const auto& geo = ctx.geometry();
    const auto frame_vec = [&](int index) {
        Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
        (index < m ? h(index) : u(index - m)) = 1.0;
        return adapted_to_coords(geo, h, u);
    };
    return from_eigen(A_bilinear(geo, frame_vec(a), frame_vec(b)));
}

Eigen::VectorXd A_bilinear(const point_geometry& geo, const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const int m = geo.dim;
    const Eigen::VectorXd hx = x.head(m);
    const Eigen::VectorXd hy = y.head(m);
    const Eigen::VectorXd ux = vertical_of(geo, x);
    const Eigen::VectorXd uy = vertical_of(geo, y);
    const Eigen::VectorXd u = curvature_contract(geo, hx, uy) - curvature_contract(geo, hy, ux);
    return adapted_to_coords(geo, Eigen::VectorXd::Zero(m), u);
}

Eigen::VectorXd nijenhuis_closed(const point_geometry& geo, const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const int m = geo.dim;
    const Eigen::VectorXd hx = x.head(m);
    const Eigen::VectorXd hy = y.head(m);
    const Eigen::VectorXd ux = vertical_of(geo, x);
    const Eigen::VectorXd uy = vertical_of(geo, y);
    const Eigen::VectorXd h = -curvature_contract(geo, hx, uy) - curvature_contract(geo, ux, hy);
    const Eigen::VectorXd u = curvature_contract(geo, ux, uy) - curvature_contract(geo, hx, hy);
    return adapted_to_coords(geo, h, u);
}

field_vector<double> nijenhuis_psi(const point_context& ctx, const vector_field& x, const vector_field& y,
                                   bracket_path path)
{
    if (path == bracket_path::structure) {
        return from_eigen(nijenhuis_closed(ctx.geometry(), to_eigen(ctx.eval(x)), to_eigen(ctx.eval(y))));
    }
    const auto a = A_tensor(ctx, x, y, path);
    return axpy(B_tensor(ctx, x, y, path), -1.0, apply_psi(ctx.values(), a));
}

field_vector<double> nijenhuis_vv_printed(const point_geometry& geo, int a, int b)
{
    const int m = geo.dim;
    field_vector<double> out(2 * m, 0.0);
    for (int i = 0; i < m; ++i) {
        out[m + i] = wedge_convention_factor *
                     (geo.r(i, a, b) + (geo.phi(i, a) * geo.y_low(b) - geo.phi(i, b) * geo.y_low(a)) / geo.f2);
    }
    return out;
}

field_vector<double> nijenhuis_phi(const point_context& ctx, const vector_field& x, const vector_field& y,
                                   bracket_path path)
{
    const auto& fr = ctx.values();
    const auto phi = [&](const field_vector<double>& v) { return apply_phi(fr, v); };
    auto out = ctx.bracket(phi_of(x), phi_of(y), path);
    out = axpy(std::move(out), 1.0, phi(phi(ctx.bracket(x, y, path))));
    out = axpy(std::move(out), -1.0, phi(ctx.bracket(phi_of(x), y, path)));
    return axpy(std::move(out), -1.0, phi(ctx.bracket(x, phi_of(y), path)));
}

field_vector<double> torsion_S(const point_context& ctx, const vector_field& x, const vector_field& y,
                               bracket_path path)
{
    auto out = nijenhuis_phi(ctx, x, y, path);
    out = axpy(std::move(out), 2.0 * d_eta(ctx, 1, x, y, path), spray(ctx.values()));
    return axpy(std::move(out), 2.0 * d_eta(ctx, 2, x, y, path), liouville(ctx.values()));
}

nijenhuis_report nijenhuis_psi_report(const point_context& ctx, bracket_path path)
{
    const int m = ctx.dim();
    const auto& geo = ctx.geometry();
    nijenhuis_report rep;
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            rep.vv_pairs.emplace_back(a, b);
            auto closed = nijenhuis_vv_printed(geo, a, b);
            for (auto& e : closed) {
                e /= wedge_convention_factor;
            }
            auto generic = nijenhuis_psi(ctx, v_vector_field(a), v_vector_field(b), path);
            rep.closed_generic_gap = std::max(rep.closed_generic_gap, max_diff(closed, generic));
            rep.closed_form.push_back(std::move(closed));
            rep.generic.push_back(std::move(generic));
        }
    }
    const auto basis = dF_fields(m, dropped_index(ctx.point().y));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            rep.on_dF = std::max(rep.on_dF, max_abs(nijenhuis_psi(ctx, basis[i], basis[j], path)));
        }
    }
    for (int a = 0; a < m; ++a) {
        rep.gamma_direction.push_back(nijenhuis_psi(ctx, liouville_field(), v_vector_field(a), path));
    }
    return rep;
}

check_report check_cr(const point_context& ctx, bracket_path path, double tolerance)
{
    const int m = ctx.dim();
    const auto& geo = ctx.geometry();
    const auto& fr = ctx.values();
    const auto basis = dF_fields(m, dropped_index(ctx.point().y));
    const double scale = 1.0 + geo.r.max_abs();
    double stability = 0.0;
    double nj = 0.0;
    double membership = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            field_vector<double> a;
            field_vector<double> b;
            field_vector<double> n;
            if (path == bracket_path::structure) {
                const auto x = to_eigen(ctx.eval(basis[i]));
                const auto y = to_eigen(ctx.eval(basis[j]));
                a = from_eigen(A_bilinear(geo, x, y));
                n = from_eigen(nijenhuis_closed(geo, x, y));
                b = axpy(n, 1.0, apply_psi(fr, a));
            } else {
                a = A_tensor(ctx, basis[i], basis[j], path);
                b = B_tensor(ctx, basis[i], basis[j], path);
                n = axpy(b, -1.0, apply_psi(fr, a));
            }
            membership = std::max({membership, std::abs(eta1(fr, a)), std::abs(eta2(fr, a))});
            stability = std::max({stability, std::abs(eta1(fr, b)), std::abs(eta2(fr, b))});
            nj = std::max(nj, max_abs(n));
        }
    }
    check_report r;
    r.add("cr-a-membership", membership / scale, tolerance);
    r.add("cr-stability", stability / scale, tolerance);
    r.add("cr-nijenhuis", nj / scale, tolerance);
    return r;
}

flag_fit_result flag_fit(const point_geometry& geo, double tolerance)
{
    const int m = geo.dim;
    flag_fit_result out;
    double rt = 0.0;
    double tt = 0.0;
    double rr = 0.0;
    const auto t = [&](int i, int j, int k) {
        return (i == k ? geo.y_low(j) : 0.0) - (i == j ? geo.y_low(k) : 0.0);
    };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                rt += geo.r(i, j, k) * t(i, j, k);
                tt += t(i, j, k) * t(i, j, k);
                rr += geo.r(i, j, k) * geo.r(i, j, k);
            }
        }
    }
    if (rr == 0.0) {
        out.lambda = 0.0;
        out.residual = 0.0;
    } else {
        out.lambda = rt / tt;
        double miss = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    const double d = geo.r(i, j, k) - out.lambda * t(i, j, k);
                    miss += d * d;
                }
            }
        }
        out.residual = std::sqrt(miss / rr);
    }
    if (out.residual < tolerance) {
        const Eigen::MatrixXd expected = out.lambda * (geo.f2 * Eigen::MatrixXd::Identity(m, m) - geo.y * geo.y_low.transpose());
        out.jacobi_residual = (geo.phi - expected).cwiseAbs().maxCoeff() / (1.0 + geo.phi.cwiseAbs().maxCoeff());
        out.mu = 1.0;
        const double mu = *out.mu;
        out.x = Eigen::MatrixXd(mu * Eigen::MatrixXd::Identity(m, m) + (1.0 - mu) * geo.y * geo.y_low.transpose() / geo.f2);
        out.x_condition_residual = (geo.y_low.transpose() * *out.x - geo.y_low.transpose()).cwiseAbs().maxCoeff();
    }
    return out;
}

flag_fit_result flag_fit(const finsler_spec& spec, const phase_point& p, double tolerance)
{
    return flag_fit(evaluate_point(spec, p), tolerance);
}

double normality_residual(const point_geometry& geo)
{
    const int m = geo.dim;
    double out = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b) {
                const double d = geo.f2 * geo.r(i, a, b) - (geo.phi(i, b) * geo.y_low(a) - geo.phi(i, a) * geo.y_low(b));
                out = std::max(out, std::abs(d));
            }
        }
    }
    return out / (1.0 + geo.f2 * geo.r.max_abs());
}

check_report nijenhuis_structure_forms(const point_geometry& geo, double mu, double tolerance, double fit_tolerance)
{
    check_report r;
    const auto fit = flag_fit(geo, fit_tolerance);
    if (!(fit.residual < fit_tolerance)) {
        r.note("structure-form: skipped, flag fit residual " + format_residual(fit.residual) +
               " is not below " + format_residual(fit_tolerance));
        return r;
    }
    if (mu == 0.0) {
        throw std::invalid_argument("structure forms need mu != 0 to recover lambda' = lambda / mu");
    }
    const int m = geo.dim;
    const double k = wedge_convention_factor;
    const double lam = fit.lambda;
    const double lam_x = lam / mu;
    const Eigen::MatrixXd xm =
        mu * Eigen::MatrixXd::Identity(m, m) + (1.0 - mu) * geo.y * geo.y_low.transpose() / geo.f2;

    double scale = 0.0;
    double curvature = 0.0;
    double jacobi = 0.0;
    double projector = 0.0;
    double x_form = 0.0;
    double mu_single = 0.0;
    double mu_double = 0.0;
    double jacobi_ratio_num = 0.0;
    double jacobi_ratio_den = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int l = 0; l < m; ++l) {
                // eta^2(ddot_j) = y_j / F^2, delta y^k(ddot_j) = delta^k_j.
                const double target = k * geo.r(i, j, l);
                scale = std::max(scale, std::abs(target));
                const double yj = geo.y_low(j) / geo.f2;
                const double yl = geo.y_low(l) / geo.f2;
                const double pv = (i == l ? yj : 0.0) - (i == j ? yl : 0.0);  // (eta^2 ^ pi_V)(ddot_j, ddot_l)^i

                const double curv = geo.r(i, j, l) - geo.r(i, l, j);
                const double jac = yj * geo.phi(i, l) - yl * geo.phi(i, j);
                const double proj = k * lam * geo.f2 * pv;
                const double xf = k * lam_x * geo.f2 * (yj * xm(i, l) - yl * xm(i, j));
                const double single = k * lam_x * mu * geo.f2 * pv;
                const double twice = k * lam_x * mu * mu * geo.f2 * pv;

                curvature = std::max(curvature, std::abs(curv - target));
                jacobi = std::max(jacobi, std::abs(jac - target));
                projector = std::max(projector, std::abs(proj - target));
                x_form = std::max(x_form, std::abs(xf - target));
                mu_single = std::max(mu_single, std::abs(single - target));
                mu_double = std::max(mu_double, std::abs(twice - target));
                jacobi_ratio_num += jac * geo.r(i, j, l);
                jacobi_ratio_den += geo.r(i, j, l) * geo.r(i, j, l);
            }
        }
    }
    const double norm = 1.0 + scale;
    r.add("structure-form-curvature", curvature / norm, tolerance);
    r.add("structure-form-jacobi", jacobi / norm, tolerance);
    r.add("structure-form-projector", projector / norm, tolerance);
    r.add("structure-form-x", x_form / norm, tolerance);
    r.add("structure-form-mu", mu_single / norm, tolerance);
    if (jacobi_ratio_den > 0.0) {
        r.note("structure-form-jacobi: reproduces " + fixed(jacobi_ratio_num / jacobi_ratio_den) +
               " x N_Psi on vertical pairs; the other forms reproduce " + fixed(k) + " x N_Psi");
    }
    r.note("structure-form-mu: mu = " + fixed(mu) + ", single-mu reading residual " + format_residual(mu_single / norm) +
           ", doubled-mu reading residual " + format_residual(mu_double / norm) + "; matching reading: " +
           (mu_single <= mu_double ? (mu_single == mu_double ? "both" : "single") : "doubled"));
    return r;
}

} // namespace finsler
