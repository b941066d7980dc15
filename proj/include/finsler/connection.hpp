#pragma once

// Cartan nonlinear connection and its curvature.
//
// Everything is derived from one jet of F^2 at the point:
//   g_ij       = 1/2 d^2F^2/dy^i dy^j                (order K-2)
//   gamma^i_jk = 1/2 g^ia (d_j g_ak + d_k g_ja - d_a g_jk)   (order K-3)
//   N^i_j      = 1/2 d/dy^j (gamma^i_jk y^j y^k)       (order K-4)
//   R^i_jk     = dN^i_j/dx^k|_h - dN^i_k/dx^j|_h       (order K-5)
// with d/dx^k|_h = d/dx^k - N^a_k d/dy^a. K = 5 yields R exactly.

#include "finsler/geometry.hpp"
#include "finsler/jet.hpp"

#include <Eigen/Dense>

#include <vector>

namespace finsler {

// Dense m x m x m array, T(i, j, k).
class tensor3 {
public:
    tensor3() = default;
    explicit tensor3(int m) : m_(m), data_(static_cast<std::size_t>(m) * m * m, 0.0) {}

    int dim() const noexcept { return m_; }
    double& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k]; }
    double operator()(int i, int j, int k) const { return data_[(static_cast<std::size_t>(i) * m_ + j) * m_ + k]; }
    const std::vector<double>& data() const noexcept { return data_; }
    double max_abs() const;

private:
    int m_ = 0;
    std::vector<double> data_;
};

double max_abs_difference(const tensor3& a, const tensor3& b);

struct local_jets {
    int dim = 0;
    int order = 0;
    taylor_jet f2;
    std::vector<taylor_jet> y_low;  // order K-1
    std::vector<taylor_jet> g;      // row-major, order K-2
    std::vector<taylor_jet> g_inv;  // order K-2
    std::vector<taylor_jet> gamma;  // (i*m + j)*m + k, order K-3 (K >= 3)
    std::vector<taylor_jet> n;      // N^i_j at i*m + j, order K-4 (K >= 4)
};

// Throws f3_violation_error if g is not positive definite at p.
local_jets compute_local_jets(const finsler_spec& spec, const phase_point& p, int order);

struct connection_value {
    tensor3 gamma;
    Eigen::VectorXd gamma00;
    Eigen::MatrixXd n;      // n(i, j) = N^i_j
    Eigen::VectorXd spray;  // coordinate coefficients of S_F, 2m entries
};

struct curvature_value {
    tensor3 r;            // R^i_jk
    Eigen::MatrixXd phi;  // R^i_j = R^i_kj y^k
};

tensor3 christoffel(const finsler_spec& spec, const phase_point& p);
connection_value nonlinear_connection(const finsler_spec& spec, const phase_point& p);
curvature_value nl_curvature(const finsler_spec& spec, const phase_point& p);

// Classical curvature R^i_ajk (R(d_j, d_k) d_a = R^i_ajk d_i) of a Riemannian
// family, built from Levi-Civita symbols of the closed-form metric g(x).
// Indexed as riemann[i][a][j][k] flattened.
struct riemann_tensor {
    int dim = 0;
    std::vector<double> data;
    double operator()(int i, int a, int j, int k) const
    {
        return data[((static_cast<std::size_t>(i) * dim + a) * dim + j) * dim + k];
    }
};

riemann_tensor riemannian_curvature(const finsler_spec& spec, const std::vector<double>& x);

// The connection curvature predicted by the classical tensor:
// R^i_jk(x, y) = R^i_jka(x) y^a with R^i_jka = R^i_akj (classical). Throws
// unsupported_family_error for non-Riemannian specs.
tensor3 riemann_oracle(const finsler_spec& spec, const phase_point& p);

// Every connection quantity at a point, evaluated once from a K = 5 jet.
struct point_geometry {
    int dim = 0;
    phase_point point;
    double f2 = 0.0;
    Eigen::VectorXd y;
    Eigen::VectorXd y_low;
    Eigen::MatrixXd g;
    Eigen::MatrixXd g_inv;
    Eigen::MatrixXd n;
    tensor3 dn_dy;        // dN^i_j/dy^k at (i, j, k)
    tensor3 r;            // R^i_jk
    Eigen::MatrixXd phi;  // Jacobi endomorphism R^i_j
    Eigen::MatrixXd dylow_dx;  // d y_j / d x^k at (j, k)
    local_jets jets;
};

point_geometry evaluate_point(const finsler_spec& spec, const phase_point& p);

} // namespace finsler
