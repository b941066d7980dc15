#include "finsler/connection.hpp"

#include "finsler/error.hpp"

#include <algorithm>
#include <cmath>

namespace finsler {

double tensor3::max_abs() const
{
    double out = 0.0;
    for (double v : data_) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

double max_abs_difference(const tensor3& a, const tensor3& b)
{
    double out = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        out = std::max(out, std::abs(a.data()[i] - b.data()[i]));
    }
    return out;
}

namespace {

// Gauss-Jordan inverse of a symmetric positive definite matrix. No pivoting:
// the leading minors of an SPD matrix are positive.
template <class S>
std::vector<S> invert_spd(std::vector<S> a, int m)
{
    std::vector<S> inv(a.size(), a[0] * 0.0);
    for (int i = 0; i < m; ++i) {
        inv[i * m + i] += 1.0;
    }
    for (int col = 0; col < m; ++col) {
        const S pivot_inv = 1.0 / a[col * m + col];
        for (int c = 0; c < m; ++c) {
            a[col * m + c] *= pivot_inv;
            inv[col * m + c] *= pivot_inv;
        }
        for (int row = 0; row < m; ++row) {
            if (row == col) {
                continue;
            }
            const S factor = a[row * m + col];
            for (int c = 0; c < m; ++c) {
                a[row * m + c] -= factor * a[col * m + c];
                inv[row * m + c] -= factor * inv[col * m + c];
            }
        }
    }
    return inv;
}

std::size_t at3(int m, int i, int j, int k)
{
    return (static_cast<std::size_t>(i) * m + j) * m + k;
}

Eigen::MatrixXd values(const std::vector<taylor_jet>& jets, int m)
{
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out(i, j) = jets[static_cast<std::size_t>(i) * m + j].value();
        }
    }
    return out;
}

} // namespace

local_jets compute_local_jets(const finsler_spec& spec, const phase_point& p, int order)
{
    validate_point(spec, p);
    if (order < 2) {
        throw order_exceeded_error("the fundamental tensor needs a jet of order >= 2");
    }
    const int m = spec.dim;
    local_jets out;
    out.dim = m;
    out.order = order;
    out.f2 = jet_lift(f2_function(spec), p, order);
    if (!(out.f2.value() > 0.0)) {
        throw f3_violation_error("F^2 is not positive at the point", out.f2.value());
    }

    out.y_low.reserve(m);
    for (int i = 0; i < m; ++i) {
        out.y_low.push_back(0.5 * out.f2.derivative(m + i));
    }
    out.g.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out.g.push_back(out.y_low[i].derivative(m + j));
        }
    }

    const Eigen::MatrixXd g0 = values(out.g, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g0, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    if (!(smallest > 0.0)) {
        throw f3_violation_error("fundamental tensor is not positive definite", smallest);
    }
    out.g_inv = invert_spd(out.g, m);

    if (order < 3) {
        return out;
    }
    // dg[(a*m + b)*m + c] = d g_ab / dx^c
    std::vector<taylor_jet> dg;
    dg.reserve(static_cast<std::size_t>(m) * m * m);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c) {
                dg.push_back(out.g[static_cast<std::size_t>(a) * m + b].derivative(c));
            }
        }
    }
    out.gamma.reserve(static_cast<std::size_t>(m) * m * m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                taylor_jet sum;
                for (int a = 0; a < m; ++a) {
                    const auto lowered = dg[at3(m, a, k, j)] + dg[at3(m, j, a, k)] - dg[at3(m, j, k, a)];
                    const auto term = out.g_inv[static_cast<std::size_t>(i) * m + a] * lowered;
                    sum = (a == 0) ? term : sum + term;
                }
                out.gamma.push_back(0.5 * sum);
            }
        }
    }

    if (order < 4) {
        return out;
    }
    std::vector<taylor_jet> y;
    for (int i = 0; i < m; ++i) {
        y.push_back(taylor_jet::variable(2 * m, order, m + i, p.y[i]));
    }
    out.n.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        taylor_jet g00;
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                const auto term = out.gamma[at3(m, i, j, k)] * y[j] * y[k];
                g00 = (j == 0 && k == 0) ? term : g00 + term;
            }
        }
        for (int j = 0; j < m; ++j) {
            out.n.push_back(0.5 * g00.derivative(m + j));
        }
    }
    return out;
}

tensor3 christoffel(const finsler_spec& spec, const phase_point& p)
{
    const auto jets = compute_local_jets(spec, p, 3);
    const int m = spec.dim;
    tensor3 out(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out(i, j, k) = jets.gamma[at3(m, i, j, k)].value();
            }
        }
    }
    return out;
}

connection_value nonlinear_connection(const finsler_spec& spec, const phase_point& p)
{
    const auto jets = compute_local_jets(spec, p, 4);
    const int m = spec.dim;
    connection_value out;
    out.gamma = tensor3(m);
    out.gamma00 = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out.gamma(i, j, k) = jets.gamma[at3(m, i, j, k)].value();
                out.gamma00(i) += out.gamma(i, j, k) * p.y[j] * p.y[k];
            }
        }
    }
    out.n = values(jets.n, m);
    // S_F = y^i d/dx^i - N^j_i y^i d/dy^j
    out.spray = Eigen::VectorXd::Zero(2 * m);
    const Eigen::Map<const Eigen::VectorXd> y(p.y.data(), m);
    out.spray.head(m) = y;
    out.spray.tail(m) = -out.n * y;
    return out;
}

point_geometry evaluate_point(const finsler_spec& spec, const phase_point& p)
{
    point_geometry out;
    out.jets = compute_local_jets(spec, p, 5);
    const auto& jets = out.jets;
    const int m = spec.dim;
    out.dim = m;
    out.point = p;
    out.f2 = jets.f2.value();
    out.y = Eigen::Map<const Eigen::VectorXd>(p.y.data(), m);
    out.y_low.resize(m);
    out.dylow_dx.resize(m, m);
    for (int j = 0; j < m; ++j) {
        out.y_low(j) = jets.y_low[j].value();
        for (int k = 0; k < m; ++k) {
            out.dylow_dx(j, k) = jets.y_low[j].first_partial(k);
        }
    }
    out.g = values(jets.g, m);
    out.g_inv = values(jets.g_inv, m);
    out.n = values(jets.n, m);
    out.dn_dy = tensor3(m);
    out.r = tensor3(m);
    // Horizontal derivative of N^i_j along x^k.
    const auto delta_n = [&](int i, int j, int k) {
        const auto& nij = jets.n[static_cast<std::size_t>(i) * m + j];
        double v = nij.first_partial(k);
        for (int a = 0; a < m; ++a) {
            v -= out.n(a, k) * nij.first_partial(m + a);
        }
        return v;
    };
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out.dn_dy(i, j, k) = jets.n[static_cast<std::size_t>(i) * m + j].first_partial(m + k);
                out.r(i, j, k) = delta_n(i, j, k) - delta_n(i, k, j);
            }
        }
    }
    out.phi = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out.phi(i, j) += out.r(i, k, j) * p.y[k];
            }
        }
    }
    return out;
}

curvature_value nl_curvature(const finsler_spec& spec, const phase_point& p)
{
    auto geo = evaluate_point(spec, p);
    return {std::move(geo.r), std::move(geo.phi)};
}

riemann_tensor riemannian_curvature(const finsler_spec& spec, const std::vector<double>& x)
{
    if (!is_riemannian(spec.kind)) {
        throw unsupported_family_error("the Levi-Civita oracle needs a Riemannian family, got " + to_string(spec.kind));
    }
    const int m = spec.dim;
    std::vector<taylor_jet> xs;
    for (int i = 0; i < m; ++i) {
        xs.push_back(taylor_jet::variable(m, 2, i, x[i]));
    }
    const auto g = riemannian_metric<taylor_jet>(spec, xs);
    const auto g_inv = invert_spd(g, m);
    // Levi-Civita symbols Gamma^i_jk(x), order 1.
    std::vector<taylor_jet> christ;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                taylor_jet sum;
                for (int a = 0; a < m; ++a) {
                    const auto term = g_inv[static_cast<std::size_t>(i) * m + a] *
                                      (g[static_cast<std::size_t>(a) * m + k].derivative(j) +
                                       g[static_cast<std::size_t>(j) * m + a].derivative(k) -
                                       g[static_cast<std::size_t>(j) * m + k].derivative(a));
                    sum = (a == 0) ? term : sum + term;
                }
                christ.push_back(0.5 * sum);
            }
        }
    }
    const auto gam = [&](int i, int j, int k) -> const taylor_jet& { return christ[at3(m, i, j, k)]; };

    riemann_tensor out;
    out.dim = m;
    out.data.assign(static_cast<std::size_t>(m) * m * m * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int a = 0; a < m; ++a) {
            for (int j = 0; j < m; ++j) {
                for (int k = 0; k < m; ++k) {
                    // R^i_ajk = d_j Gamma^i_ka - d_k Gamma^i_ja + Gamma^i_jb Gamma^b_ka - Gamma^i_kb Gamma^b_ja
                    double v = gam(i, k, a).first_partial(j) - gam(i, j, a).first_partial(k);
                    for (int b = 0; b < m; ++b) {
                        v += gam(i, j, b).value() * gam(b, k, a).value() - gam(i, k, b).value() * gam(b, j, a).value();
                    }
                    out.data[((static_cast<std::size_t>(i) * m + a) * m + j) * m + k] = v;
                }
            }
        }
    }
    return out;
}

tensor3 riemann_oracle(const finsler_spec& spec, const phase_point& p)
{
    validate_point(spec, p);
    const auto riem = riemannian_curvature(spec, p.x);
    const int m = spec.dim;
    tensor3 out(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                double v = 0.0;
                for (int a = 0; a < m; ++a) {
                    v += riem(i, a, k, j) * p.y[a];
                }
                out(i, j, k) = v;
            }
        }
    }
    return out;
}

} // namespace finsler
