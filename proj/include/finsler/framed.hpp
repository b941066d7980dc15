#pragma once

// The almost Kaehler pair (Psi_F, G_F) on the slit tangent bundle and the
// metric framed f-structure (phi, xi_a, eta^a, G) built from it.
//
// All matrices act on coordinate vectors (d/dx^i, d/dy^i); a covector c is
// stored as the row of components, so c(Z) = c.dot(Z).

#include "finsler/connection.hpp"
#include "finsler/report.hpp"
#include "finsler/vector_field.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace finsler {

struct framed_structure {
    int dim = 0;
    double f2 = 0.0;
    // Columns of adapted are delta_i then ddot_i; adapted_inv maps coordinate
    // components to (dx^i, delta y^i) components.
    Eigen::MatrixXd adapted;
    Eigen::MatrixXd adapted_inv;
    Eigen::MatrixXd g_f;    // Sasaki metric g_ij dx dx + g_ij dy dy
    Eigen::MatrixXd g;      // g_f / F^2
    Eigen::MatrixXd psi;
    Eigen::MatrixXd phi;
    Eigen::MatrixXd omega;  // omega(X, Y) = G(X, phi Y)
    Eigen::VectorXd xi1;    // S_F
    Eigen::VectorXd xi2;    // Liouville field
    Eigen::VectorXd eta1;   // y_i dx^i / F^2
    Eigen::VectorXd eta2;   // y_i delta y^i / F^2
};

framed_structure build_framed_structure(const point_geometry& geo);
framed_structure build_framed_structure(const finsler_spec& spec, const phase_point& p);

// Adapted basis matrix for block coefficients: horizontal block h (acting on
// dx components) and vertical block u (on delta y components) mapped to
// coordinate form.
Eigen::MatrixXd adapted_to_coordinates(const framed_structure& fs, const Eigen::MatrixXd& block);

// Tolerance and normalisation used by the matrix axiom checks: residual is
// max|M| / (1 + max|operands|).
inline constexpr double framed_tolerance = 1e-9;
inline constexpr double rank_threshold = 1e-8;

// Rank from singular values relative to the largest one.
int numerical_rank(const Eigen::MatrixXd& m, double threshold = rank_threshold);

// Definition of a metric framed f-structure with two pairs (xi_a, eta^a):
// phi^3 + phi = 0, rank phi = 2m - 2, phi^2 = -I + eta^a (x) xi_a,
// phi(xi_a) = 0, eta^a(xi_b) = delta, eta^a o phi = 0,
// G(phi., phi.) = G - eta^1 (x) eta^1 - eta^2 (x) eta^2, G(xi_a, xi_a) = 1.
// Record ids are prefix + "-" + name.
check_report framed_axioms(const std::string& prefix, const Eigen::MatrixXd& phi, const Eigen::VectorXd& xi1,
                           const Eigen::VectorXd& xi2, const Eigen::VectorXd& eta1, const Eigen::VectorXd& eta2,
                           const Eigen::MatrixXd& metric, double tolerance = framed_tolerance);

// The axioms above plus Psi^2 = -I, almost Kaehler compatibility, eta^a as
// G-duals of xi_a, and omega antisymmetric with kernel span{xi_1, xi_2}.
check_report framed_structure_checks(const framed_structure& fs, double tolerance = framed_tolerance);

struct frame_data {
    int dim = 0;
    int dropped = 0;              // i0 = argmax |y^i|, smallest index on ties
    Eigen::MatrixXd delta_x;      // m x 2m, rows delta_i
    Eigen::MatrixXd del_y;        // m x 2m, rows ddot_i
    Eigen::MatrixXd h;            // m x 2m, rows h_i
    Eigen::MatrixXd v;            // m x 2m, rows v_i
    Eigen::MatrixXd coframe_dx;   // m x 2m, rows dx^i
    Eigen::MatrixXd coframe_dy;   // m x 2m, rows delta y^i
    Eigen::MatrixXd df_basis;     // (2m - 2) x 2m: h_i then v_i, i != i0
};

int dropped_index(const std::vector<double>& y);

// Throws rank_error if the selected basis is not of rank 2m - 2.
frame_data dF_basis(const point_geometry& geo);
frame_data dF_basis(const finsler_spec& spec, const phase_point& p);

// Same basis as fields, in the same order as frame_data::df_basis.
std::vector<vector_field> dF_fields(int m, int dropped);

vector_field h_vector_field(int i);
vector_field v_vector_field(int i);
vector_field spray_field();
vector_field liouville_field();

// eta^1 and eta^2 as scalar-valued maps of a field, for derivatives.
scalar_field eta_of(int a, const vector_field& x);

} // namespace finsler
