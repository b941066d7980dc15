#include "finsler/framed.hpp"

#include "finsler/error.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double relative(const Eigen::MatrixXd& residual, std::initializer_list<double> scales)
{
    double scale = 0.0;
    for (double s : scales) {
        scale = std::max(scale, s);
    }
    return max_abs(residual) / (1.0 + scale);
}

} // namespace

framed_structure build_framed_structure(const point_geometry& geo)
{
    const int m = geo.dim;
    const int n = 2 * m;
    framed_structure fs;
    fs.dim = m;
    fs.f2 = geo.f2;

    fs.adapted = Eigen::MatrixXd::Identity(n, n);
    fs.adapted.bottomLeftCorner(m, m) = -geo.n;
    fs.adapted_inv = Eigen::MatrixXd::Identity(n, n);
    fs.adapted_inv.bottomLeftCorner(m, m) = geo.n;

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
    block.topLeftCorner(m, m) = geo.g;
    block.bottomRightCorner(m, m) = geo.g;
    fs.g_f = fs.adapted_inv.transpose() * block * fs.adapted_inv;
    fs.g = fs.g_f / geo.f2;

    Eigen::MatrixXd psi_adapted = Eigen::MatrixXd::Zero(n, n);
    psi_adapted.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    psi_adapted.bottomLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    fs.psi = fs.adapted * psi_adapted * fs.adapted_inv;

    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    h.head(m) = geo.y;
    fs.xi1 = fs.adapted * h;
    fs.xi2 = Eigen::VectorXd::Zero(n);
    fs.xi2.tail(m) = geo.y;

    Eigen::VectorXd low = Eigen::VectorXd::Zero(n);
    low.head(m) = geo.y_low / geo.f2;
    fs.eta1 = fs.adapted_inv.transpose() * low;
    low.setZero();
    low.tail(m) = geo.y_low / geo.f2;
    fs.eta2 = fs.adapted_inv.transpose() * low;

    fs.phi = fs.psi + fs.xi2 * fs.eta1.transpose() - fs.xi1 * fs.eta2.transpose();
    fs.omega = fs.g * fs.phi;
    return fs;
}

framed_structure build_framed_structure(const finsler_spec& spec, const phase_point& p)
{
    return build_framed_structure(evaluate_point(spec, p));
}

Eigen::MatrixXd adapted_to_coordinates(const framed_structure& fs, const Eigen::MatrixXd& block)
{
    return fs.adapted * block * fs.adapted_inv;
}

int numerical_rank(const Eigen::MatrixXd& m, double threshold)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > threshold * s(0)) {
            ++rank;
        }
    }
    return rank;
}

check_report framed_axioms(const std::string& prefix, const Eigen::MatrixXd& phi, const Eigen::VectorXd& xi1,
                           const Eigen::VectorXd& xi2, const Eigen::VectorXd& eta1, const Eigen::VectorXd& eta2,
                           const Eigen::MatrixXd& metric, double tolerance)
{
    const Eigen::Index n = phi.rows();
    const int m = static_cast<int>(n / 2);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const double sphi = max_abs(phi);
    const double sframe = std::max({xi1.cwiseAbs().maxCoeff(), xi2.cwiseAbs().maxCoeff(), eta1.cwiseAbs().maxCoeff(),
                                    eta2.cwiseAbs().maxCoeff()});
    const Eigen::MatrixXd frame_part = xi1 * eta1.transpose() + xi2 * eta2.transpose();
    const Eigen::MatrixXd phi2 = phi * phi;
    check_report r;
    const auto id_of = [&](const char* name) { return prefix + "-" + name; };

    r.add(id_of("f-cubic"), relative(phi2 * phi + phi, {sphi * sphi * sphi}), tolerance);
    r.add(id_of("rank"), std::abs(numerical_rank(phi) - (2.0 * m - 2.0)), 0.5);
    r.add(id_of("phi-squared"), relative(phi2 + id - frame_part, {sphi * sphi, max_abs(frame_part)}), tolerance);

    Eigen::MatrixXd kills(n, 2);
    kills << phi * xi1, phi * xi2;
    r.add(id_of("phi-xi"), relative(kills, {sphi * sframe}), tolerance);

    Eigen::Matrix2d duality;
    duality << eta1.dot(xi1) - 1.0, eta1.dot(xi2), eta2.dot(xi1), eta2.dot(xi2) - 1.0;
    r.add(id_of("eta-xi"), relative(duality, {sframe * sframe}), tolerance);

    Eigen::MatrixXd eta_phi(n, 2);
    eta_phi << phi.transpose() * eta1, phi.transpose() * eta2;
    r.add(id_of("eta-phi"), relative(eta_phi, {sphi * sframe}), tolerance);

    const Eigen::MatrixXd compat =
        phi.transpose() * metric * phi - metric + eta1 * eta1.transpose() + eta2 * eta2.transpose();
    r.add(id_of("metric"), relative(compat, {max_abs(metric) * std::max(1.0, sphi * sphi)}), tolerance);

    Eigen::Vector2d unit(xi1.dot(metric * xi1) - 1.0, xi2.dot(metric * xi2) - 1.0);
    r.add(id_of("unit-xi"), relative(unit, {}), tolerance);
    return r;
}

check_report framed_structure_checks(const framed_structure& fs, double tolerance)
{
    const Eigen::Index n = fs.psi.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    auto r = framed_axioms("framed", fs.phi, fs.xi1, fs.xi2, fs.eta1, fs.eta2, fs.g, tolerance);
    const double spsi = max_abs(fs.psi);
    r.add("framed-psi-complex", relative(fs.psi * fs.psi + id, {spsi * spsi}), tolerance);
    r.add("framed-kaehler", relative(fs.psi.transpose() * fs.g_f * fs.psi - fs.g_f, {max_abs(fs.g_f) * spsi * spsi}),
          tolerance);

    Eigen::MatrixXd dual(n, 2);
    dual << fs.eta1 - fs.g * fs.xi1, fs.eta2 - fs.g * fs.xi2;
    r.add("framed-eta-dual", relative(dual, {max_abs(fs.g) * fs.xi1.cwiseAbs().maxCoeff()}), tolerance);

    Eigen::MatrixXd kernel(2, n);
    kernel << fs.xi1.transpose() * fs.omega, fs.xi2.transpose() * fs.omega;
    r.add("framed-omega-kernel", relative(kernel, {max_abs(fs.omega) * fs.xi1.cwiseAbs().maxCoeff()}), tolerance);
    r.add("framed-omega-antisymmetric", relative(fs.omega + fs.omega.transpose(), {max_abs(fs.omega)}), tolerance);
    return r;
}

int dropped_index(const std::vector<double>& y)
{
    int best = 0;
    for (int i = 1; i < static_cast<int>(y.size()); ++i) {
        if (std::abs(y[i]) > std::abs(y[best])) {
            best = i;
        }
    }
    return best;
}

frame_data dF_basis(const point_geometry& geo)
{
    const int m = geo.dim;
    const int n = 2 * m;
    frame_data fd;
    fd.dim = m;
    fd.dropped = dropped_index(geo.point.y);

    fd.delta_x = Eigen::MatrixXd::Zero(m, n);
    fd.del_y = Eigen::MatrixXd::Zero(m, n);
    fd.coframe_dx = Eigen::MatrixXd::Zero(m, n);
    fd.coframe_dy = Eigen::MatrixXd::Zero(m, n);
    for (int i = 0; i < m; ++i) {
        fd.delta_x(i, i) = 1.0;
        fd.del_y(i, m + i) = 1.0;
        fd.coframe_dx(i, i) = 1.0;
        fd.coframe_dy(i, m + i) = 1.0;
        for (int a = 0; a < m; ++a) {
            fd.delta_x(i, m + a) = -geo.n(a, i);
            fd.coframe_dy(i, a) = geo.n(i, a);
        }
    }
    const Eigen::RowVectorXd spray = geo.y.transpose() * fd.delta_x;
    const Eigen::RowVectorXd liouville = geo.y.transpose() * fd.del_y;
    fd.h = fd.delta_x - (geo.y_low / geo.f2) * spray;
    fd.v = fd.del_y - (geo.y_low / geo.f2) * liouville;

    fd.df_basis = Eigen::MatrixXd::Zero(n - 2, n);
    int row = 0;
    for (int i = 0; i < m; ++i) {
        if (i != fd.dropped) {
            fd.df_basis.row(row) = fd.h.row(i);
            fd.df_basis.row(m - 1 + row) = fd.v.row(i);
            ++row;
        }
    }
    if (numerical_rank(fd.df_basis) != n - 2) {
        throw rank_error("selected basis of the structural distribution is rank deficient");
    }
    return fd;
}

frame_data dF_basis(const finsler_spec& spec, const phase_point& p)
{
    return dF_basis(evaluate_point(spec, p));
}

vector_field h_vector_field(int i)
{
    return make_field("h_" + std::to_string(i), [i](const auto& fr) { return h_field(fr, i); });
}

vector_field v_vector_field(int i)
{
    return make_field("v_" + std::to_string(i), [i](const auto& fr) { return v_field(fr, i); });
}

vector_field spray_field()
{
    return make_field("S_F", [](const auto& fr) { return spray(fr); });
}

vector_field liouville_field()
{
    return make_field("Gamma", [](const auto& fr) { return liouville(fr); });
}

std::vector<vector_field> dF_fields(int m, int dropped)
{
    std::vector<vector_field> out;
    for (int i = 0; i < m; ++i) {
        if (i != dropped) {
            out.push_back(h_vector_field(i));
        }
    }
    for (int i = 0; i < m; ++i) {
        if (i != dropped) {
            out.push_back(v_vector_field(i));
        }
    }
    return out;
}

scalar_field eta_of(int a, const vector_field& x)
{
    if (a != 1 && a != 2) {
        throw std::out_of_range("eta index must be 1 or 2");
    }
    return make_scalar("eta" + std::to_string(a) + "(" + x.name + ")", [a, x](const auto& fr) {
        return a == 1 ? eta1(fr, x(fr)) : eta2(fr, x(fr));
    });
}

} // namespace finsler
