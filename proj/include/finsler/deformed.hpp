#pragma once

// One-parameter deformation of the framed structure:
//
//   G_bar = G_ij dx^i dx^j + H_ij delta y^i delta y^j
//   G_ij = g_ij / beta + v/(alpha beta) y_i y_j,  H_ij = beta g_ij + w y_i y_j
//   Psi_bar(delta_i) = -G^a_i ddot_a,  Psi_bar(ddot_i) = H^a_i delta_a
//   xi_bar_1 = (beta + tau w) S_F, xi_bar_2 = Gamma
//   eta_bar_1 = eta^1, eta_bar_2 = (beta/tau + w) y_i delta y^i
//   phi_bar = Psi_bar + xi_bar_2 (x) eta_bar_1 - xi_bar_1 (x) eta_bar_2
//
// with tau = F^2. The standard choice v = alpha (beta - 1)/tau,
// w = (1 - beta)/tau makes G^a_j and H^a_j inverse and beta + tau w = 1.

#include "finsler/framed.hpp"
#include "finsler/nijenhuis.hpp"
#include "finsler/report.hpp"
#include "finsler/vector_field.hpp"

#include <Eigen/Dense>

namespace finsler {

struct deformed_structure {
    int dim = 0;
    deformation_coefficients coeffs;
    double tau = 0.0;
    double v = 0.0;  // v(tau)
    double w = 0.0;  // w(tau)
    Eigen::MatrixXd g_low;    // G_ij
    Eigen::MatrixXd h_low;    // H_ij
    Eigen::MatrixXd g_mixed;  // G^a_j
    Eigen::MatrixXd h_mixed;  // H^a_j
    Eigen::MatrixXd g_bar;    // coordinate matrix of G_bar
    Eigen::MatrixXd psi_bar;
    Eigen::MatrixXd phi_bar;
    Eigen::VectorXd xi1;
    Eigen::VectorXd xi2;
    Eigen::VectorXd eta1;
    Eigen::VectorXd eta2;
};

// Throws feasibility_error when alpha + 2 tau v <= 0 (beta <= 1/2 for the
// standard choice) or when G_bar is not positive definite.
deformed_structure build_deformed(const point_geometry& geo, const deformation_coefficients& d);
deformed_structure build_deformed(const point_geometry& geo, double beta, double alpha = 1.0);
deformed_structure build_deformed(const finsler_spec& spec, const phase_point& p, double beta);

// Standard coefficients with w shifted by shift / tau, breaking beta + tau w = 1.
deformation_coefficients perturbed_deformation(double beta, double shift);

// Records: deformed-frame-collapse |beta + tau w - 1|, deformed-w-consistency
// against w = -beta v/(alpha + tau v), deformed-inverse |G^a_u H^u_j - delta|,
// deformed-psi-h |Psi_bar(h_i) + v_i/beta|, deformed-psi-v |Psi_bar(v_i) - beta h_i|.
check_report deformed_invariants(const deformed_structure& ds, const point_geometry& geo, double tolerance = 1e-9);

// Framed structure axioms for (phi_bar, xi_bar, eta_bar, G_bar / tau) under
// ids deformed-*.
check_report deformed_axioms(const deformed_structure& ds, double tolerance = framed_tolerance);

// A_bar(X, Y) = [X, Psi_bar Y] + [Psi_bar X, Y]
field_vector<double> A_bar_tensor(const point_context& ctx, const deformation_coefficients& d, const vector_field& x,
                                  const vector_field& y, bracket_path path);
field_vector<double> B_bar_tensor(const point_context& ctx, const deformation_coefficients& d, const vector_field& x,
                                  const vector_field& y, bracket_path path);
field_vector<double> nijenhuis_psi_bar(const point_context& ctx, const deformation_coefficients& d,
                                       const vector_field& x, const vector_field& y, bracket_path path);

// A_bar on adapted frame fields (index < m: delta_i, else ddot_i). The
// structure path evaluates the general frame formulas in G^a_j, H^a_j, their
// derivatives, dN/dy and R^i_jk.
field_vector<double> A_bar_frame(const point_context& ctx, const deformation_coefficients& d, int a, int b,
                                 bracket_path path);

// The simplified frame values as printed for the standard choice:
//   (delta_j, delta_k): (beta-1)/(beta tau) [delta_k(y_j y^v) - delta_j(y_k y^v)] ddot_v
//   (ddot_j, ddot_k):   (1-beta) [ddot_j(y_k y^v/tau) - ddot_k(y_j y^v/tau)] delta_v
//   (delta_j, ddot_k):  (1-beta)/tau delta_j(y_k y^v) delta_v
//                       + [beta R^v_jk + (1-beta)/tau y_k y^u R^v_ju + (beta-1)/beta ddot_k(y_j y^v/tau)] ddot_v
// The first two omit the terms (beta-1)/(beta tau) (y_j N^v_k - y_k N^v_j) ddot_v
// and (1-beta)/tau (y_j N^v_k - y_k N^v_j) ddot_v of the bracket values.
field_vector<double> A_bar_frame_printed(const point_geometry& geo, double beta, int a, int b);

// CR conditions for (D_F, Psi_bar|D_F), reported without assuming them.
// Records (each divided by 1 + max|R|):
//   deformed-cr-membership     max |eta^a(A_bar)| over adapted frame pairs
//   deformed-cr-membership-df  max |eta^a(A_bar)| over D_F basis pairs
//   deformed-cr-nijenhuis      max |N_Psi_bar| over D_F basis pairs
//   deformed-cr-stability      max |eta^a([JX, JY] - [X, Y])| over D_F basis pairs
//   deformed-cr-torsion        max |N_Psi_bar - eta^1(A_bar) xi_2 + eta^2(A_bar) xi_1|
// The structure path uses the frame formulas for the first record and the
// jet path for the bracket-defined ones.
check_report deformed_cr_check(const point_context& ctx, double beta, bracket_path path, double tolerance);

struct obstruction_diagnostics {
    // beta eta^2 A_bar(delta_j, delta_k) - eta^1 A_bar(delta_j, ddot_k) + eta^1 A_bar(delta_k, ddot_j)
    double identity_printed = 0.0;  // with the printed frame values
    double identity_bracket = 0.0;  // with the bracket values
    Eigen::MatrixXd delta_y_low;    // delta y_k / delta x^j at (j, k)
    Eigen::VectorXd c_fit;          // least squares c_j in delta_j y_k = c_j y_k
    Eigen::VectorXd c_from_membership;  // y_a N^a_j / F^2, from eta^1 A_bar(delta_j, ddot_k) = 0
    double eigen_residual = 0.0;    // max_j |delta_j y - c_j y| / (1 + |delta y|)
    double spray_residual = 0.0;    // |S_F(y_k) - (y^j c_j) y_k| / (1 + |delta y|)
    Eigen::MatrixXd p;              // y_v ddot_k(y_j y^v / F^2) = g_jk - y_j y_k / F^2
    double p_norm = 0.0;            // spectral norm
};

obstruction_diagnostics deformed_obstruction(const point_geometry& geo, double beta);

// Records deformed-obstruction-identity (printed values), -eigen and -spray;
// the remaining quantities go into notes.
check_report deformed_obstruction_report(const point_geometry& geo, double beta, double tolerance = 1e-5);

} // namespace finsler
