#include "finsler/deformed.hpp"

#include "finsler/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace finsler {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const field_vector<double>& v)
{
    double out = 0.0;
    for (double e : v) {
        out = std::max(out, std::abs(e));
    }
    return out;
}

field_vector<double> axpy(field_vector<double> a, double s, const field_vector<double>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += s * b[i];
    }
    return a;
}

Eigen::VectorXd adapted_to_coords(const point_geometry& geo, const Eigen::VectorXd& h, const Eigen::VectorXd& u)
{
    const int m = geo.dim;
    Eigen::VectorXd out(2 * m);
    out.head(m) = h;
    out.tail(m) = u - geo.n * h;
    return out;
}

double eta1_of(const point_geometry& geo, const Eigen::VectorXd& x)
{
    return geo.y_low.dot(x.head(geo.dim)) / geo.f2;
}

double eta2_of(const point_geometry& geo, const Eigen::VectorXd& x)
{
    const int m = geo.dim;
    return geo.y_low.dot(x.tail(m) + geo.n * x.head(m)) / geo.f2;
}

std::string fixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

std::string vector_text(const Eigen::VectorXd& v)
{
    std::string out = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + fixed(v(i));
    }
    return out + ")";
}

// delta y_j / delta x^k at (j, k)
Eigen::MatrixXd delta_y_low(const point_geometry& geo)
{
    return geo.dylow_dx - geo.g * geo.n;
}

// Coefficient c(tau) y^v y_j with c = k / tau and its adapted derivatives.
struct rank_one_term {
    const point_geometry& geo;
    double k;
    Eigen::MatrixXd del_ylow;  // (j, k)
    Eigen::VectorXd del_tau;

    rank_one_term(const point_geometry& g, double coefficient)
        : geo(g), k(coefficient), del_ylow(delta_y_low(g)), del_tau(g.dylow_dx.transpose() * g.y)
    {
        del_tau -= 2.0 * g.n.transpose() * g.y_low;
    }

    double c() const { return k / geo.f2; }
    double dc() const { return -k / (geo.f2 * geo.f2); }

    // delta_k (c y^v y_j)
    double delta(int v, int j, int kk) const
    {
        return dc() * del_tau(kk) * geo.y(v) * geo.y_low(j) +
               c() * (-geo.n(v, kk) * geo.y_low(j) + geo.y(v) * del_ylow(j, kk));
    }

    // ddot_u (c y^v y_j)
    double ddot(int v, int j, int u) const
    {
        return dc() * 2.0 * geo.y_low(u) * geo.y(v) * geo.y_low(j) +
               c() * ((v == u ? geo.y_low(j) : 0.0) + geo.y(v) * geo.g(j, u));
    }
};

Eigen::VectorXd a_bar_closed(const point_geometry& geo, const deformation_coefficients& d, int a, int b)
{
    const int m = geo.dim;
    if ((a < m) != (b < m) && a >= m) {
        return -a_bar_closed(geo, d, b, a);
    }
    const rank_one_term gt(geo, d.v_tau / (d.alpha * d.beta));
    const rank_one_term ht(geo, d.w_tau);
    const auto g_mixed = [&](int v, int j) { return (v == j ? 1.0 / d.beta : 0.0) + gt.c() * geo.y(v) * geo.y_low(j); };
    const auto h_mixed = [&](int v, int j) { return (v == j ? d.beta : 0.0) + ht.c() * geo.y(v) * geo.y_low(j); };
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    if (a < m && b < m) {
        const int j = a;
        const int k = b;
        for (int v = 0; v < m; ++v) {
            u(v) = gt.delta(v, j, k) - gt.delta(v, k, j);
            for (int s = 0; s < m; ++s) {
                u(v) += g_mixed(s, j) * geo.dn_dy(v, k, s) - g_mixed(s, k) * geo.dn_dy(v, j, s);
            }
        }
    } else if (a >= m && b >= m) {
        const int j = a - m;
        const int k = b - m;
        for (int v = 0; v < m; ++v) {
            h(v) = ht.ddot(v, k, j) - ht.ddot(v, j, k);
            for (int s = 0; s < m; ++s) {
                u(v) += h_mixed(s, j) * geo.dn_dy(v, s, k) - h_mixed(s, k) * geo.dn_dy(v, s, j);
            }
        }
    } else {
        const int j = a;
        const int k = b - m;
        for (int v = 0; v < m; ++v) {
            h(v) = ht.delta(v, k, j);
            u(v) = gt.ddot(v, j, k);
            for (int s = 0; s < m; ++s) {
                u(v) += h_mixed(s, k) * geo.r(v, j, s);
            }
        }
    }
    return adapted_to_coords(geo, h, u);
}

Eigen::VectorXd a_bar_printed(const point_geometry& geo, double beta, int a, int b)
{
    const int m = geo.dim;
    if ((a < m) != (b < m) && a >= m) {
        return -a_bar_printed(geo, beta, b, a);
    }
    const double tau = geo.f2;
    const Eigen::MatrixXd del_ylow = delta_y_low(geo);
    // delta_k (y_j y^v)
    const auto delta_yy = [&](int j, int v, int k) { return -geo.n(v, k) * geo.y_low(j) + geo.y(v) * del_ylow(j, k); };
    // ddot_k (y_j y^v / tau)
    const auto ddot_yy = [&](int j, int v, int k) {
        return (geo.g(j, k) * geo.y(v) + (v == k ? geo.y_low(j) : 0.0)) / tau -
               2.0 * geo.y_low(j) * geo.y(v) * geo.y_low(k) / (tau * tau);
    };
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
    if (a < m && b < m) {
        const double c = (beta - 1.0) / (beta * tau);
        for (int v = 0; v < m; ++v) {
            u(v) = c * (delta_yy(a, v, b) - delta_yy(b, v, a));
        }
    } else if (a >= m && b >= m) {
        const int j = a - m;
        const int k = b - m;
        for (int v = 0; v < m; ++v) {
            h(v) = (1.0 - beta) * (ddot_yy(k, v, j) - ddot_yy(j, v, k));
        }
    } else {
        const int j = a;
        const int k = b - m;
        for (int v = 0; v < m; ++v) {
            h(v) = (1.0 - beta) / tau * delta_yy(k, v, j);
            double ry = 0.0;
            for (int s = 0; s < m; ++s) {
                ry += geo.y(s) * geo.r(v, j, s);
            }
            u(v) = beta * geo.r(v, j, k) + (1.0 - beta) / tau * geo.y_low(k) * ry +
                   (beta - 1.0) / beta * ddot_yy(j, v, k);
        }
    }
    return adapted_to_coords(geo, h, u);
}

} // namespace

deformation_coefficients perturbed_deformation(double beta, double shift)
{
    auto d = standard_deformation(beta);
    d.w_tau += shift;
    return d;
}

deformed_structure build_deformed(const point_geometry& geo, const deformation_coefficients& d)
{
    if (!(d.alpha > 0.0) || !(d.beta > 0.0) || !(d.alpha + 2.0 * d.v_tau > 0.0)) {
        throw feasibility_error("deformation infeasible: need alpha, beta > 0 and alpha + 2 tau v > 0 (beta > 1/2)");
    }
    const int m = geo.dim;
    const int n = 2 * m;
    deformed_structure ds;
    ds.dim = m;
    ds.coeffs = d;
    ds.tau = geo.f2;
    ds.v = d.v_tau / ds.tau;
    ds.w = d.w_tau / ds.tau;

    const Eigen::MatrixXd yy_low = geo.y_low * geo.y_low.transpose();
    ds.g_low = geo.g / d.beta + (ds.v / (d.alpha * d.beta)) * yy_low;
    ds.h_low = d.beta * geo.g + ds.w * yy_low;
    ds.g_mixed = geo.g_inv * ds.g_low;
    ds.h_mixed = geo.g_inv * ds.h_low;
    if (ds.g_low.llt().info() != Eigen::Success || ds.h_low.llt().info() != Eigen::Success) {
        throw feasibility_error("deformed metric is not positive definite");
    }

    Eigen::MatrixXd adapted = Eigen::MatrixXd::Identity(n, n);
    adapted.bottomLeftCorner(m, m) = -geo.n;
    Eigen::MatrixXd adapted_inv = Eigen::MatrixXd::Identity(n, n);
    adapted_inv.bottomLeftCorner(m, m) = geo.n;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
    block.topLeftCorner(m, m) = ds.g_low;
    block.bottomRightCorner(m, m) = ds.h_low;
    ds.g_bar = adapted_inv.transpose() * block * adapted_inv;

    Eigen::MatrixXd psi_adapted = Eigen::MatrixXd::Zero(n, n);
    psi_adapted.topRightCorner(m, m) = ds.h_mixed;
    psi_adapted.bottomLeftCorner(m, m) = -ds.g_mixed;
    ds.psi_bar = adapted * psi_adapted * adapted_inv;

    const double collapse = d.beta + d.w_tau;
    Eigen::VectorXd part = Eigen::VectorXd::Zero(n);
    part.head(m) = geo.y;
    ds.xi1 = collapse * (adapted * part);
    ds.xi2 = Eigen::VectorXd::Zero(n);
    ds.xi2.tail(m) = geo.y;

    part.setZero();
    part.head(m) = geo.y_low / ds.tau;
    ds.eta1 = adapted_inv.transpose() * part;
    part.setZero();
    part.tail(m) = geo.y_low / ds.tau;
    ds.eta2 = collapse * (adapted_inv.transpose() * part);

    ds.phi_bar = ds.psi_bar + ds.xi2 * ds.eta1.transpose() - ds.xi1 * ds.eta2.transpose();
    return ds;
}

deformed_structure build_deformed(const point_geometry& geo, double beta, double alpha)
{
    return build_deformed(geo, standard_deformation(beta, alpha));
}

deformed_structure build_deformed(const finsler_spec& spec, const phase_point& p, double beta)
{
    return build_deformed(evaluate_point(spec, p), beta);
}

check_report deformed_invariants(const deformed_structure& ds, const point_geometry& geo, double tolerance)
{
    const auto& d = ds.coeffs;
    const int m = ds.dim;
    check_report r;
    r.add("deformed-frame-collapse", std::abs(d.beta + d.w_tau - 1.0), tolerance);
    r.add("deformed-w-consistency", std::abs(d.w_tau + d.beta * d.v_tau / (d.alpha + d.v_tau)), tolerance);
    r.add("deformed-inverse", max_abs(ds.g_mixed * ds.h_mixed - Eigen::MatrixXd::Identity(m, m)), tolerance);

    const auto fd = dF_basis(geo);
    const Eigen::MatrixXd psi_h = fd.h * ds.psi_bar.transpose();
    const Eigen::MatrixXd psi_v = fd.v * ds.psi_bar.transpose();
    const double scale = 1.0 + max_abs(ds.psi_bar) * std::max(max_abs(fd.h), max_abs(fd.v));
    r.add("deformed-psi-h", max_abs(psi_h + fd.v / d.beta) / scale, tolerance);
    r.add("deformed-psi-v", max_abs(psi_v - d.beta * fd.h) / scale, tolerance);
    return r;
}

check_report deformed_axioms(const deformed_structure& ds, double tolerance)
{
    return framed_axioms("deformed", ds.phi_bar, ds.xi1, ds.xi2, ds.eta1, ds.eta2, ds.g_bar / ds.tau, tolerance);
}

field_vector<double> A_bar_tensor(const point_context& ctx, const deformation_coefficients& d, const vector_field& x,
                                  const vector_field& y, bracket_path path)
{
    auto out = ctx.bracket(x, psi_bar_of(y, d), path);
    return axpy(std::move(out), 1.0, ctx.bracket(psi_bar_of(x, d), y, path));
}

field_vector<double> B_bar_tensor(const point_context& ctx, const deformation_coefficients& d, const vector_field& x,
                                  const vector_field& y, bracket_path path)
{
    auto out = ctx.bracket(psi_bar_of(x, d), psi_bar_of(y, d), path);
    return axpy(std::move(out), -1.0, ctx.bracket(x, y, path));
}

field_vector<double> nijenhuis_psi_bar(const point_context& ctx, const deformation_coefficients& d,
                                       const vector_field& x, const vector_field& y, bracket_path path)
{
    if (path == bracket_path::structure) {
        throw std::invalid_argument("no closed form for the deformed Nijenhuis tensor");
    }
    const auto a = A_bar_tensor(ctx, d, x, y, path);
    return axpy(B_bar_tensor(ctx, d, x, y, path), -1.0, apply_psi_bar(ctx.values(), d, a));
}

field_vector<double> A_bar_frame(const point_context& ctx, const deformation_coefficients& d, int a, int b,
                                 bracket_path path)
{
    const int m = ctx.dim();
    if (path == bracket_path::structure) {
        return from_eigen(a_bar_closed(ctx.geometry(), d, a, b));
    }
    return A_bar_tensor(ctx, d, adapted_field(m, a), adapted_field(m, b), path);
}

field_vector<double> A_bar_frame_printed(const point_geometry& geo, double beta, int a, int b)
{
    return from_eigen(a_bar_printed(geo, beta, a, b));
}

check_report deformed_cr_check(const point_context& ctx, double beta, bracket_path path, double tolerance)
{
    const int m = ctx.dim();
    const auto& geo = ctx.geometry();
    const auto& fr = ctx.values();
    const auto d = standard_deformation(beta);
    const double scale = 1.0 + geo.r.max_abs();

    double frame_membership = 0.0;
    for (int a = 0; a < 2 * m; ++a) {
        for (int b = a + 1; b < 2 * m; ++b) {
            const auto v = A_bar_frame(ctx, d, a, b, path);
            frame_membership = std::max({frame_membership, std::abs(eta1(fr, v)), std::abs(eta2(fr, v))});
        }
    }

    const auto bracket = path == bracket_path::structure ? bracket_path::jet : path;
    const auto basis = dF_fields(m, dropped_index(ctx.point().y));
    const auto xi1 = spray(fr);
    const auto xi2 = liouville(fr);
    double membership = 0.0;
    double nijenhuis = 0.0;
    double stability = 0.0;
    double torsion = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            const auto a = A_bar_tensor(ctx, d, basis[i], basis[j], bracket);
            const auto b = B_bar_tensor(ctx, d, basis[i], basis[j], bracket);
            const auto n = axpy(b, -1.0, apply_psi_bar(fr, d, a));
            const double e1 = eta1(fr, a);
            const double e2 = eta2(fr, a);
            const auto s = axpy(axpy(n, -e1, xi2), e2, xi1);
            membership = std::max({membership, std::abs(e1), std::abs(e2)});
            stability = std::max({stability, std::abs(eta1(fr, b)), std::abs(eta2(fr, b))});
            nijenhuis = std::max(nijenhuis, max_abs(n));
            torsion = std::max(torsion, max_abs(s));
        }
    }
    check_report r;
    r.add("deformed-cr-membership", frame_membership / scale, tolerance);
    r.add("deformed-cr-membership-df", membership / scale, tolerance);
    r.add("deformed-cr-nijenhuis", nijenhuis / scale, tolerance);
    r.add("deformed-cr-stability", stability / scale, tolerance);
    r.add("deformed-cr-torsion", torsion / scale, tolerance);
    return r;
}

obstruction_diagnostics deformed_obstruction(const point_geometry& geo, double beta)
{
    const int m = geo.dim;
    const double tau = geo.f2;
    const auto d = standard_deformation(beta);
    obstruction_diagnostics out;

    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            const auto identity = [&](const auto& value) {
                return beta * eta2_of(geo, value(j, k)) - eta1_of(geo, value(j, m + k)) + eta1_of(geo, value(k, m + j));
            };
            out.identity_printed = std::max(
                out.identity_printed, std::abs(identity([&](int a, int b) { return a_bar_printed(geo, beta, a, b); })));
            out.identity_bracket = std::max(
                out.identity_bracket, std::abs(identity([&](int a, int b) { return a_bar_closed(geo, d, a, b); })));
        }
    }

    // delta_j y_k at (j, k)
    out.delta_y_low = delta_y_low(geo).transpose();
    const double yy = geo.y_low.squaredNorm();
    out.c_fit = out.delta_y_low * geo.y_low / yy;
    out.c_from_membership = geo.n.transpose() * geo.y_low / tau;
    const double scale = 1.0 + out.delta_y_low.norm();
    for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd row = out.delta_y_low.row(j).transpose() - out.c_fit(j) * geo.y_low;
        out.eigen_residual = std::max(out.eigen_residual, row.norm() / scale);
    }
    const Eigen::VectorXd spray_y = out.delta_y_low.transpose() * geo.y;
    out.spray_residual = (spray_y - geo.y.dot(out.c_fit) * geo.y_low).norm() / scale;

    out.p = geo.g - geo.y_low * geo.y_low.transpose() / tau;
    out.p_norm = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(out.p, Eigen::EigenvaluesOnly)
                     .eigenvalues()
                     .cwiseAbs()
                     .maxCoeff();
    return out;
}

check_report deformed_obstruction_report(const point_geometry& geo, double beta, double tolerance)
{
    const auto diag = deformed_obstruction(geo, beta);
    check_report r;
    r.add("deformed-obstruction-identity", diag.identity_printed, tolerance);
    r.add("deformed-obstruction-eigen", diag.eigen_residual, tolerance);
    r.add("deformed-obstruction-spray", diag.spray_residual, tolerance);
    r.note("deformed-obstruction: identity with bracket frame values " + fixed(diag.identity_bracket));
    r.note("deformed-obstruction: fitted c " + vector_text(diag.c_fit) + ", y_a N^a_j / F^2 " +
           vector_text(diag.c_from_membership));
    r.note("deformed-obstruction: |g_jk - y_j y_k / F^2| = " + fixed(diag.p_norm) + ", eta^2 A_bar(delta, ddot) scale " +
           fixed(std::abs(beta - 1.0) / (beta * geo.f2) * diag.p_norm));
    return r;
}

} // namespace finsler
