#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finsler/error.hpp"
#include "finsler/framed.hpp"
#include "finsler/sampling.hpp"

#include <cmath>

using namespace finsler;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// G-orthogonal projector onto the row span of b.
Eigen::MatrixXd projector_onto_rows(const Eigen::MatrixXd& b, const Eigen::MatrixXd& g)
{
    const Eigen::MatrixXd bt = b.transpose();
    return bt * (b * g * bt).inverse() * b * g;
}

} // namespace

TEST_CASE("flat chart example")
{
    const auto spec = catalog_entry("euclidean", 2);
    const auto fs = build_framed_structure(spec, {{0, 0}, {1, 0}});
    CHECK(fs.f2 == 1.0);
    CHECK(max_abs(fs.eta1 - Eigen::Vector4d(1, 0, 0, 0)) == 0.0);
    CHECK(max_abs(fs.xi1 - Eigen::Vector4d(1, 0, 0, 0)) == 0.0);
    CHECK(max_abs(fs.xi2 - Eigen::Vector4d(0, 0, 1, 0)) == 0.0);
    CHECK(max_abs(fs.phi * fs.phi * fs.phi + fs.phi) == 0.0);
}

TEST_CASE("framed structure axioms on the catalog")
{
    for (int m = 2; m <= 4; ++m) {
        for (const auto& name : catalog_names()) {
            const auto spec = catalog_entry(name, m);
            for (int i = 0; i < 8; ++i) {
                const auto fs = build_framed_structure(spec, sample_point(spec, 101, i));
                const auto r = framed_structure_checks(fs);
                for (const auto& rec : r.records()) {
                    INFO(name, " m=", m, " ", rec.check_id, " residual=", rec.residual);
                    CHECK(rec.passed);
                }
                CHECK(numerical_rank(fs.phi) == 2 * m - 2);
            }
        }
    }
}

TEST_CASE("sphere metric compatibility")
{
    const auto spec = catalog_entry("sphere", 3);
    for (int i = 0; i < 10; ++i) {
        const auto fs = build_framed_structure(spec, sample_point(spec, 7, i));
        const Eigen::MatrixXd res = fs.phi.transpose() * fs.g * fs.phi - fs.g + fs.eta1 * fs.eta1.transpose() +
                                    fs.eta2 * fs.eta2.transpose();
        CHECK(max_abs(res) < 1e-9);
    }
}

TEST_CASE("axiom checker catches a broken structure")
{
    const auto spec = catalog_entry("randers", 3);
    auto fs = build_framed_structure(spec, sample_point(spec, 7, 0));
    const Eigen::VectorXd bad_eta = 1.1 * fs.eta2;
    const auto r = framed_axioms("broken", fs.phi, fs.xi1, fs.xi2, fs.eta1, bad_eta, fs.g);
    CHECK_FALSE(r.all_passed());
    CHECK(r.max_residual("broken-eta-xi") > 1e-3);
}

TEST_CASE("structural distribution basis")
{
    const auto eu = catalog_entry("euclidean", 2);
    const auto fd = dF_basis(eu, {{0, 0}, {1, 0}});
    CHECK(fd.dropped == 0);
    const auto fs = build_framed_structure(eu, {{0, 0}, {1, 0}});
    REQUIRE(fd.df_basis.rows() == 2);
    CHECK(max_abs(fd.df_basis.row(0) - fd.h.row(1)) == 0.0);
    CHECK(max_abs(fd.df_basis.row(1) - fd.v.row(1)) == 0.0);
    CHECK(max_abs(fd.df_basis * fs.eta1) == 0.0);
    CHECK(max_abs(fd.df_basis * fs.eta2) == 0.0);

    CHECK(dropped_index({1.0, -1.0, 0.5}) == 0);
    CHECK(dropped_index({0.2, -1.0, 1.0}) == 1);

    for (int m = 2; m <= 4; ++m) {
        for (const auto& spec : family_catalog(m)) {
            for (int i = 0; i < 20; ++i) {
                const auto p = sample_point(spec, 55, i);
                const auto geo = evaluate_point(spec, p);
                const auto f = dF_basis(geo);
                const auto s = build_framed_structure(geo);
                const Eigen::Map<const Eigen::VectorXd> y(p.y.data(), m);
                CHECK(max_abs(y.transpose() * f.h) < 1e-12 * (1.0 + max_abs(f.h)) * y.norm());
                CHECK(max_abs(y.transpose() * f.v) < 1e-12 * (1.0 + max_abs(f.v)) * y.norm());
                CHECK(numerical_rank(f.df_basis) == 2 * m - 2);
                CHECK(max_abs(f.df_basis * s.eta1) < 1e-9);
                CHECK(max_abs(f.df_basis * s.eta2) < 1e-9);
                CHECK(max_abs(f.df_basis * s.g_f * s.xi1) < 1e-9 * (1.0 + max_abs(s.g_f)));
                CHECK(max_abs(f.df_basis * s.g_f * s.xi2) < 1e-9 * (1.0 + max_abs(s.g_f)));
                // Psi(h_i) = -v_i, Psi(v_i) = h_i.
                CHECK(max_abs(f.h * s.psi.transpose() + f.v) < 1e-9);
                CHECK(max_abs(f.v * s.psi.transpose() - f.h) < 1e-9);
                // omega is nonsingular on the structural distribution.
                const Eigen::MatrixXd om = f.df_basis * s.omega * f.df_basis.transpose();
                CHECK(numerical_rank(om) == 2 * m - 2);
                // Same space as the G_F-orthogonal complement of span{xi_1, xi_2}.
                Eigen::MatrixXd xi(2, 2 * m);
                xi << s.xi1.transpose(), s.xi2.transpose();
                const Eigen::MatrixXd complement =
                    Eigen::MatrixXd::Identity(2 * m, 2 * m) - projector_onto_rows(xi, s.g_f);
                CHECK(max_abs(projector_onto_rows(f.df_basis, s.g_f) - complement) < 1e-8);
            }
        }
    }
}

TEST_CASE("dF fields match the basis rows")
{
    const auto spec = catalog_entry("randers", 3);
    const auto p = sample_point(spec, 2, 4);
    const point_context ctx(spec, p);
    const auto fd = dF_basis(ctx.geometry());
    const auto fields = dF_fields(3, fd.dropped);
    REQUIRE(fields.size() == 4);
    for (std::size_t r = 0; r < fields.size(); ++r) {
        const auto v = ctx.eval(fields[r]);
        for (int c = 0; c < 6; ++c) {
            CHECK(v[c] == doctest::Approx(fd.df_basis(r, c)).epsilon(1e-13));
        }
        const auto jv = fields[r](ctx.jets());
        CHECK(jv[0].value() == doctest::Approx(v[0]).epsilon(1e-13));
    }
    // Generic helpers agree with the matrices.
    const auto fs = build_framed_structure(ctx.geometry());
    const auto x = ctx.eval(h_vector_field(1));
    const Eigen::Map<const Eigen::VectorXd> xv(x.data(), 6);
    const auto psi = apply_psi(ctx.values(), x);
    const auto phi = apply_phi(ctx.values(), ctx.eval(v_vector_field(2)));
    const auto v2 = ctx.eval(v_vector_field(2));
    const Eigen::Map<const Eigen::VectorXd> v2v(v2.data(), 6);
    const Eigen::VectorXd psi_m = fs.psi * xv;
    const Eigen::VectorXd phi_m = fs.phi * v2v;
    for (int c = 0; c < 6; ++c) {
        CHECK(psi[c] == doctest::Approx(psi_m(c)).epsilon(1e-12));
        CHECK(phi[c] == doctest::Approx(phi_m(c)).epsilon(1e-12));
    }
    const auto s = ctx.eval(spray_field());
    CHECK(eta1(ctx.values(), s) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eta2(ctx.values(), ctx.eval(liouville_field())) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("span of the frame fields is integrable")
{
    for (int m = 2; m <= 4; ++m) {
        for (const auto& spec : family_catalog(m)) {
            const point_context ctx(spec, sample_point(spec, 77, 0), true);
            const auto expected = ctx.eval(spray_field());
            const auto br = ctx.bracket(liouville_field(), spray_field(), bracket_path::finite_difference);
            for (int c = 0; c < 2 * m; ++c) {
                CHECK(std::abs(br[c] - expected[c]) < 1e-5);
            }
        }
    }
}
