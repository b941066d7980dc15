#include "finsler/suite.hpp"

#include "finsler/deformed.hpp"
#include "finsler/error.hpp"
#include "finsler/nijenhuis.hpp"
#include "finsler/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

namespace finsler {

namespace {

using nlohmann::json;

const std::vector<check_info> registry = {
    {"finsler-axioms", "homogeneity, Euler identity and positive definiteness of g", false, false},
    {"framed-axioms", "metric framed f-structure axioms for (phi, xi_a, eta^a, G)", false, false},
    {"curvature-identity", "y_i R^i_jk = 0", false, false},
    {"spray-bracket", "[Gamma, S_F] = S_F by finite differences", false, false},
    {"oracle-equivalence", "R^i_jk against the Levi-Civita contraction R^i_jka y^a", false, true},
    {"nijenhuis", "closed-form N_Psi against both bracket paths; eta^a o A = 0", false, false},
    {"torsion", "S = N_Psi on D_F by finite differences", false, false},
    {"cr", "CR conditions for (D_F, Psi|D_F)", false, false},
    {"flag-fit", "scalar flag curvature fit, Jacobi form and normality", false, false},
    {"structure-forms", "scalar flag curvature forms of N_Psi on vertical pairs", false, false},
    {"deformed-structure", "deformed metric, Psi_bar invariants and framed axioms", true, false},
    {"deformed-cr", "CR hypotheses for (D_F, Psi_bar|D_F), reported not assumed", true, false},
    {"deformed-obstruction", "identity, eigen-condition and obstruction diagnostics", true, false},
};

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) {
        throw config_error(where + " must be an object");
    }
    for (const auto& item : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }) ==
            allowed.end()) {
            throw config_error("unknown key '" + item.key() + "' in " + where);
        }
    }
}

finsler_spec spec_from_json(const json& j)
{
    reject_unknown(j, {"entry", "name", "family", "dimension", "params", "chart"}, "spec");
    if (!j.contains("dimension")) {
        throw config_error("spec.dimension is required");
    }
    const int dim = j.at("dimension").get<int>();
    finsler_spec spec;
    if (j.contains("entry")) {
        if (j.contains("family")) {
            throw config_error("spec takes either entry or family, not both");
        }
        spec = catalog_entry(j.at("entry").get<std::string>(), dim);
    } else if (j.contains("family")) {
        spec.kind = family_from_string(j.at("family").get<std::string>());
        spec.name = to_string(spec.kind);
        spec.dim = dim;
    } else {
        throw config_error("spec needs an entry or a family");
    }
    if (j.contains("name")) {
        spec.name = j.at("name").get<std::string>();
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        reject_unknown(p, {"c", "b", "conformal_gradient", "conformal_quadratic", "shear", "anisotropy"}, "spec.params");
        if (p.contains("c")) {
            spec.curvature = p.at("c").get<double>();
        }
        if (p.contains("b")) {
            spec.b = p.at("b").get<std::vector<double>>();
        }
        if (p.contains("conformal_gradient")) {
            spec.conformal_gradient = p.at("conformal_gradient").get<std::vector<double>>();
        }
        if (p.contains("conformal_quadratic")) {
            spec.conformal_quadratic = p.at("conformal_quadratic").get<double>();
        }
        if (p.contains("shear")) {
            spec.shear = p.at("shear").get<double>();
        }
        if (p.contains("anisotropy")) {
            spec.anisotropy = p.at("anisotropy").get<std::vector<double>>();
        }
    }
    if (j.contains("chart")) {
        const auto& c = j.at("chart");
        reject_unknown(c, {"radius"}, "spec.chart");
        spec.chart_radius = c.at("radius").get<double>();
    }
    validate_spec(spec);
    return spec;
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("malformed configuration: ") + e.what());
    }
}

std::string beta_suffix(double beta) { return "/beta=" + format_number(beta); }

void add_suffixed(check_report& into, const check_report& from, const std::string& suffix)
{
    for (auto rec : from.records()) {
        rec.check_id += suffix;
        into.add(std::move(rec));
    }
    for (const auto& n : from.notes()) {
        into.note(n);
    }
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

check_report curvature_identity(const point_geometry& geo, double tol)
{
    const int m = geo.dim;
    double worst = 0.0;
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) {
                s += geo.y_low(i) * geo.r(i, j, k);
            }
            worst = std::max(worst, std::abs(s));
        }
    }
    check_report r;
    r.add("curvature-identity", worst / (1.0 + geo.r.max_abs() * geo.y_low.cwiseAbs().maxCoeff()), tol);
    return r;
}

check_report nijenhuis_paths(const point_context& ctx, const run_config& cfg)
{
    const int m = ctx.dim();
    const double scale = 1.0 + ctx.geometry().r.max_abs();
    std::vector<vector_field> fields{spray_field(), liouville_field()};
    for (int a = 0; a < 2 * m; ++a) {
        fields.push_back(adapted_field(m, a));
    }
    double jet_gap = 0.0;
    double fd_gap = 0.0;
    for (const auto& x : fields) {
        for (const auto& y : fields) {
            const auto closed = nijenhuis_psi(ctx, x, y, bracket_path::structure);
            jet_gap = std::max(jet_gap, max_diff(closed, nijenhuis_psi(ctx, x, y, bracket_path::jet)));
            fd_gap = std::max(fd_gap, max_diff(closed, nijenhuis_psi(ctx, x, y, bracket_path::finite_difference)));
        }
    }
    double eta_a = 0.0;
    for (int a = 0; a < 2 * m; ++a) {
        for (int b = 0; b < 2 * m; ++b) {
            const auto v = A_frame(ctx, a, b, bracket_path::jet);
            eta_a = std::max({eta_a, std::abs(eta1(ctx.values(), v)), std::abs(eta2(ctx.values(), v))});
        }
    }
    check_report r;
    r.add("nijenhuis-jet-path", jet_gap / scale, cfg.tolerances.jet_exact);
    r.add("nijenhuis-fd-path", fd_gap / scale, cfg.tolerances.bracket);
    r.add("nijenhuis-eta-a", eta_a / scale, cfg.tolerances.jet_exact);
    return r;
}

check_report torsion_check(const point_context& ctx, const run_config& cfg)
{
    const auto basis = dF_fields(ctx.dim(), dropped_index(ctx.point().y));
    double worst = 0.0;
    for (const auto& x : basis) {
        for (const auto& y : basis) {
            const auto s = torsion_S(ctx, x, y, bracket_path::finite_difference);
            worst = std::max(worst, max_diff(s, nijenhuis_psi(ctx, x, y, bracket_path::structure)));
        }
    }
    check_report r;
    r.add("torsion", worst / (1.0 + ctx.geometry().r.max_abs()), cfg.tolerances.bracket);
    return r;
}

check_report spray_bracket(const point_context& ctx, const run_config& cfg)
{
    const auto br = ctx.bracket(liouville_field(), spray_field(), bracket_path::finite_difference);
    const auto s = ctx.eval(spray_field());
    check_report r;
    r.add("spray-bracket", max_diff(br, s) / (1.0 + max_abs(s)), cfg.tolerances.bracket);
    return r;
}

struct flag_tracker {
    int count = 0;
    double lambda_min = std::numeric_limits<double>::infinity();
    double lambda_max = -std::numeric_limits<double>::infinity();
};

check_report flag_check(const point_geometry& geo, flag_tracker& tracker)
{
    const auto fit = flag_fit(geo);
    check_report r;
    r.add("flag-fit-misfit", fit.residual, default_flag_tolerance);
    if (fit.jacobi_residual) {
        r.add("flag-fit-jacobi", *fit.jacobi_residual, default_flag_tolerance);
    }
    r.add("flag-fit-normality", normality_residual(geo), default_flag_tolerance);
    ++tracker.count;
    tracker.lambda_min = std::min(tracker.lambda_min, fit.lambda);
    tracker.lambda_max = std::max(tracker.lambda_max, fit.lambda);
    return r;
}

bool needs_stencil(const std::string& id)
{
    return id == "spray-bracket" || id == "nijenhuis" || id == "torsion";
}

check_report run_check(const std::string& id, const point_context& ctx, const run_config& cfg,
                       flag_tracker& tracker)
{
    const auto& spec = ctx.spec();
    const auto& p = ctx.point();
    const auto& geo = ctx.geometry();
    const double jet = cfg.tolerances.jet_exact;
    const double bracket = cfg.tolerances.bracket;
    if (id == "finsler-axioms") {
        return validate_finsler_axioms(spec, p, 2.0, jet);
    }
    if (id == "framed-axioms") {
        return framed_structure_checks(build_framed_structure(geo), jet);
    }
    if (id == "curvature-identity") {
        return curvature_identity(geo, jet);
    }
    if (id == "spray-bracket") {
        return spray_bracket(ctx, cfg);
    }
    if (id == "oracle-equivalence") {
        const auto oracle = riemann_oracle(spec, p);
        check_report r;
        r.add("oracle-equivalence", max_abs_difference(geo.r, oracle) / (1.0 + oracle.max_abs()), jet);
        return r;
    }
    if (id == "nijenhuis") {
        return nijenhuis_paths(ctx, cfg);
    }
    if (id == "torsion") {
        return torsion_check(ctx, cfg);
    }
    if (id == "cr") {
        return check_cr(ctx, bracket_path::jet, jet);
    }
    if (id == "flag-fit") {
        return flag_check(geo, tracker);
    }
    if (id == "structure-forms") {
        return nijenhuis_structure_forms(geo);
    }
    check_report r;
    for (double beta : cfg.beta_values) {
        const auto suffix = beta_suffix(beta);
        if (id == "deformed-structure") {
            const auto ds = build_deformed(geo, beta);
            add_suffixed(r, deformed_invariants(ds, geo, jet), suffix);
            add_suffixed(r, deformed_axioms(ds, jet), suffix);
        } else if (id == "deformed-cr") {
            add_suffixed(r, deformed_cr_check(ctx, beta, bracket_path::jet, jet), suffix);
        } else if (id == "deformed-obstruction") {
            add_suffixed(r, deformed_obstruction_report(geo, beta, bracket), suffix);
        }
    }
    return r;
}

} // namespace

const std::vector<check_info>& check_registry() { return registry; }

const check_info* find_check(const std::string& id)
{
    const auto it = std::find_if(registry.begin(), registry.end(), [&](const auto& c) { return c.id == id; });
    return it == registry.end() ? nullptr : &*it;
}

finsler_spec parse_spec(const std::string& json_text)
{
    try {
        return spec_from_json(parse_json(json_text));
    } catch (const json::exception& e) {
        throw config_error(std::string("invalid spec: ") + e.what());
    }
}

run_config parse_config(const std::string& json_text, bool validate)
{
    const json j = parse_json(json_text);
    run_config cfg;
    try {
        reject_unknown(j, {"spec", "n_points", "seed", "tolerances", "beta_values", "checks", "output"}, "configuration");
        if (!j.contains("spec")) {
            throw config_error("configuration needs a spec");
        }
        cfg.spec = spec_from_json(j.at("spec"));
        if (j.contains("n_points")) {
            cfg.n_points = j.at("n_points").get<int>();
        }
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) {
                throw config_error("seed must be a non-negative integer");
            }
            cfg.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            reject_unknown(t, {"jet_exact", "bracket"}, "tolerances");
            if (t.contains("jet_exact")) {
                cfg.tolerances.jet_exact = t.at("jet_exact").get<double>();
            }
            if (t.contains("bracket")) {
                cfg.tolerances.bracket = t.at("bracket").get<double>();
            }
        }
        if (j.contains("beta_values")) {
            cfg.beta_values = j.at("beta_values").get<std::vector<double>>();
        }
        if (j.contains("checks")) {
            cfg.checks = j.at("checks").get<std::vector<std::string>>();
        }
        if (j.contains("output")) {
            cfg.output = j.at("output").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("invalid configuration: ") + e.what());
    }
    if (validate) {
        validate_config(cfg);
    }
    return cfg;
}

run_config load_config(const std::filesystem::path& path, bool validate)
{
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot read configuration file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), validate);
}

void validate_config(const run_config& config)
{
    validate_spec(config.spec);
    if (config.n_points < 1) {
        throw config_error("n_points must be at least 1");
    }
    if (!(config.tolerances.jet_exact > 0.0) || !(config.tolerances.bracket > 0.0)) {
        throw config_error("tolerances must be positive");
    }
    for (double beta : config.beta_values) {
        if (!(beta > 0.5)) {
            throw config_error("every beta must exceed 1/2, got " + format_number(beta));
        }
    }
    if (config.checks.empty()) {
        throw config_error("no checks requested");
    }
    for (const auto& id : config.checks) {
        const auto* info = find_check(id);
        if (!info) {
            throw config_error("unknown check id: " + id);
        }
        if (info->per_beta && config.beta_values.empty()) {
            throw config_error("check " + id + " needs at least one beta value");
        }
        if (info->riemannian_only && !is_riemannian(config.spec.kind)) {
            throw config_error("check " + id + " applies to Riemannian entries only");
        }
    }
}

check_report run_suite(const run_config& config)
{
    validate_config(config);
    std::vector<std::string> checks = config.checks;
    std::sort(checks.begin(), checks.end());
    checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
    const bool stencil = std::any_of(checks.begin(), checks.end(), needs_stencil);

    check_report out;
    flag_tracker tracker;
    for (int i = 0; i < config.n_points; ++i) {
        const auto p = sample_point(config.spec, config.seed, i);
        std::optional<point_context> ctx;
        try {
            ctx.emplace(config.spec, p, stencil);
        } catch (const chart_domain_error& e) {
            throw config_error(std::string("chart violation at a sampled point: ") + e.what());
        } catch (const error& e) {
            out.merge([&] {
                check_report r;
                r.add("point-evaluation", std::numeric_limits<double>::infinity(), 0.0);
                r.note("point " + std::to_string(i) + ": " + e.what());
                return r;
            }(), i);
            continue;
        }
        for (const auto& id : checks) {
            check_report r;
            bool failed = false;
            try {
                r = run_check(id, *ctx, config, tracker);
            } catch (const error& e) {
                failed = true;
                r.add(id + "-evaluation", std::numeric_limits<double>::infinity(), 0.0);
                r.note(id + " at point " + std::to_string(i) + ": " + e.what());
            }
            if (i == 0 || failed) {
                out.merge(r, i);
                continue;
            }
            // Check notes carry point-specific values; only the first point's are kept.
            for (auto rec : r.records()) {
                rec.point_index = i;
                out.add(std::move(rec));
            }
        }
    }
    if (tracker.count > 0) {
        out.note("flag-fit: lambda in [" + format_number(tracker.lambda_min) + ", " + format_number(tracker.lambda_max) +
                 "] over " + std::to_string(tracker.count) + " points");
    }
    out.normalize_order();
    return out;
}

int exit_status(const check_report& report) { return report.all_passed() ? exit_pass : exit_check_failure; }

} // namespace finsler
