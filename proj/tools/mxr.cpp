// mxr: batch interface for catalog sampling, mesh export, compatibility
// verification, associate-family generation, conjugacy checks and
// reconstruction from fundamental-data documents.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mxr/associate.hpp"
#include "mxr/catalog.hpp"
#include "mxr/document.hpp"
#include "mxr/frames.hpp"
#include "mxr/hopf.hpp"
#include "mxr/mesh.hpp"

namespace {

using namespace mxr;

// spec strings: family-name[:parameter], e.g. "s2-helicoid:1", "h2-horocycle",
// "s2-slice:0.3", "h2-vertical-plane".
CatalogSpec parse_spec(const std::string& s) {
    std::string name = s;
    std::optional<double> param;
    if (const auto pos = s.find(':'); pos != std::string::npos) {
        name = s.substr(0, pos);
        try {
            std::size_t used = 0;
            param = std::stod(s.substr(pos + 1), &used);
            if (used != s.size() - pos - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ValidationError("--spec: cannot parse parameter in '" + s + "'");
        }
    }
    CatalogSpec spec;
    if (name == "s2-slice" || name == "h2-slice") {
        spec.kind = Family::Slice;
        spec.slice_kappa = (name[0] == 's') ? 1 : -1;
        spec.parameter = param.value_or(0.0);
    } else {
        bool found = false;
        for (Family f : {Family::S2_Helicoid, Family::S2_Unduloid, Family::H2_Helicoid,
                         Family::H2_Catenoid, Family::H2_Horocycle, Family::H2_GenCatenoid,
                         Family::S2_Cylinder, Family::H2_VerticalPlane})
            if (name == family_name(f)) {
                spec.kind = f;
                found = true;
                break;
            }
        if (!found)
            throw ValidationError("--spec: unknown family '" + name + "'");
        const bool needs_param =
            has_profile(spec.kind);
        if (needs_param && !param)
            throw ValidationError("--spec: family '" + name + "' requires a parameter, e.g. " +
                                  name + ":1");
        spec.parameter = param.value_or(0.0);
    }
    validate(spec);
    return spec;
}

// pair strings: "u:1.4142135,h:1" with kinds u (unduloid), h (helicoid),
// c (catenoid), c0 (horocycle surface), g (generalized catenoid).
std::pair<CatalogSpec, CatalogSpec> parse_pair(const std::string& s, const std::string& space) {
    if (space != "s2" && space != "h2")
        throw ValidationError("--space must be 's2' or 'h2'");
    const bool s2 = space == "s2";
    std::vector<CatalogSpec> specs;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(',', start);
        if (end == std::string::npos) end = s.size();
        const std::string tok = s.substr(start, end - start);
        std::string kind = tok;
        double param = 0.0;
        bool has_param = false;
        if (const auto pos = tok.find(':'); pos != std::string::npos) {
            kind = tok.substr(0, pos);
            try {
                param = std::stod(tok.substr(pos + 1));
                has_param = true;
            } catch (const std::exception&) {
                throw ValidationError("--pair: cannot parse parameter in '" + tok + "'");
            }
        }
        CatalogSpec spec;
        if (kind == "u" && s2) spec.kind = Family::S2_Unduloid;
        else if (kind == "h") spec.kind = s2 ? Family::S2_Helicoid : Family::H2_Helicoid;
        else if (kind == "c" && !s2) spec.kind = Family::H2_Catenoid;
        else if (kind == "c0" && !s2) spec.kind = Family::H2_Horocycle;
        else if (kind == "g" && !s2) spec.kind = Family::H2_GenCatenoid;
        else
            throw ValidationError("--pair: unknown kind '" + kind + "' for space " + space);
        if (has_profile(spec.kind) && !has_param)
            throw ValidationError("--pair: kind '" + kind + "' requires a parameter");
        spec.parameter = param;
        validate(spec);
        specs.push_back(spec);
        start = end + 1;
        if (end == s.size()) break;
    }
    if (specs.size() != 2)
        throw ValidationError("--pair: expected exactly two comma-separated entries");
    return {specs[0], specs[1]};
}

std::optional<CatalogSpec> known_conjugate(const CatalogSpec& s) {
    const double p = std::abs(s.parameter);
    const double sgn = (s.parameter < 0.0) ? -1.0 : 1.0;
    switch (s.kind) {
        case Family::S2_Unduloid:
            return CatalogSpec(Family::S2_Helicoid, sgn * std::sqrt(p * p - 1.0));
        case Family::S2_Helicoid:
            return CatalogSpec(Family::S2_Unduloid, sgn * std::sqrt(1.0 + p * p));
        case Family::H2_Catenoid:
            return CatalogSpec(Family::H2_Helicoid, sgn * std::sqrt(1.0 + p * p));
        case Family::H2_Horocycle:
            return CatalogSpec(Family::H2_Helicoid, 1.0);
        case Family::H2_GenCatenoid:
            return CatalogSpec(Family::H2_Helicoid, sgn * std::sqrt(1.0 - p * p));
        case Family::H2_Helicoid:
            if (p > 1.0) return CatalogSpec(Family::H2_Catenoid, sgn * std::sqrt(p * p - 1.0));
            if (p == 1.0) return CatalogSpec(Family::H2_Horocycle, 0.0);
            return CatalogSpec(Family::H2_GenCatenoid, sgn * std::sqrt(1.0 - p * p));
        default: return std::nullopt;
    }
}

void print_residual_report(const ResidualReport& r) {
    std::printf("equation\tmax\trms\n");
    std::printf("gauss\t%.17g\t%.17g\n", r.gauss.max, r.gauss.rms);
    std::printf("codazzi\t%.17g\t%.17g\n", r.codazzi.max, r.codazzi.rms);
    std::printf("nabla_T\t%.17g\t%.17g\n", r.nabla_T.max, r.nabla_T.rms);
    std::printf("d_nu\t%.17g\t%.17g\n", r.d_nu.max, r.d_nu.rms);
    std::printf("unit_norm\t%.17g\t%.17g\n", r.unit_norm.max, r.unit_norm.rms);
    std::printf("d_eta\t%.17g\t%.17g\n", r.d_eta.max, r.d_eta.rms);
    std::printf("tolerance\t%.17g\t-\n", r.tolerance);
    std::printf("pass\t%s\t-\n", r.pass ? "yes" : "no");
}

MeshModel default_model(const Signature& sig, const std::string& tag) {
    if (!tag.empty()) return parse_mesh_model(tag);
    return sig.kappa == 1 ? MeshModel::Stereographic : MeshModel::PoincareDisk;
}

int cmd_catalog() {
    std::printf("name\tambient\tparameter\tdomain\n");
    std::printf("s2-helicoid\tS2xR\tbeta != 0\tu unbounded\n");
    std::printf("s2-unduloid\tS2xR\t|alpha| > 1\tu unbounded\n");
    std::printf("h2-helicoid\tH2xR\tbeta != 0\t|u| < u0\n");
    std::printf("h2-catenoid\tH2xR\talpha != 0\t|u| < u0, 2u0 < pi\n");
    std::printf("h2-horocycle\tH2xR\t(none)\t|u| < pi/2\n");
    std::printf("h2-gencatenoid\tH2xR\t0 < |gamma| < 1\t|u| < u0, 2u0 > pi\n");
    std::printf("s2-slice\tS2xR\theight t\tu, v unbounded\n");
    std::printf("h2-slice\tH2xR\theight t\tu, v unbounded\n");
    std::printf("s2-cylinder\tS2xR\t(none)\tu, v unbounded\n");
    std::printf("h2-vertical-plane\tH2xR\t(none)\tu, v unbounded\n");
    return 0;
}

int cmd_sample(const std::string& spec_str, double h, double halfwidth,
               const std::string& out, const std::string& model_tag,
               const std::string& data_out) {
    const CatalogSpec spec = parse_spec(spec_str);
    const Surface surf = make_surface(spec);
    const ParameterGrid grid = grid_for(spec, h, halfwidth);
    if (!out.empty()) {
        std::vector<Vec> nodes(static_cast<std::size_t>(grid.size()));
        for (int i = 0; i < grid.nu; ++i)
            for (int j = 0; j < grid.nv; ++j)
                nodes[static_cast<std::size_t>(grid.index(i, j))] =
                    surf.chart.eval(grid.u(i), grid.v(j));
        write_mesh_obj(nodes, grid, surf.sig, default_model(surf.sig, model_tag), out);
        std::printf("mesh\t%s\t%d vertices\n", out.c_str(), grid.size());
    }
    if (!data_out.empty()) {
        const FundamentalData data = fundamental_closed_form(surf, grid);
        write_data_document(data, data_out);
        std::printf("data\t%s\t%d nodes\n", data_out.c_str(), grid.size());
    }
    if (out.empty() && data_out.empty())
        std::printf("spec\t%s\tgrid %dx%d (nothing written; use --out/--data)\n",
                    family_name(spec.kind), grid.nu, grid.nv);
    return 0;
}

int cmd_verify(const std::string& spec_str, const std::string& in, double tol, double h) {
    FundamentalData data;
    if (!spec_str.empty()) {
        const CatalogSpec spec = parse_spec(spec_str);
        data = fundamental_closed_form(spec, grid_for(spec, h));
        if (tol < 0.0) tol = 1e-8;
    } else if (!in.empty()) {
        data = read_data_document(in);
        if (tol < 0.0) {
            const double hh = std::max(data.grid.hu(), data.grid.hv());
            tol = 10.0 * hh * hh;
        }
    } else {
        throw ValidationError("verify: provide --spec or --in");
    }
    const ResidualReport rep = check_compatibility(data, tol);
    print_residual_report(rep);
    if (!rep.pass) {
        std::string names;
        for (const std::string& n : rep.failing_names()) {
            if (!names.empty()) names += ",";
            names += n;
        }
        std::printf("failed\t%s\t%.17g\n", names.c_str(), rep.worst());
        return 1;
    }
    return 0;
}

int cmd_associate(const std::string& spec_str, double theta, double h, const std::string& out,
                  const std::string& model_tag) {
    const CatalogSpec spec = parse_spec(spec_str);
    const Surface surf = make_surface(spec);
    const ParameterGrid grid = grid_for(spec, h);
    const AssociateImmersion assoc = associate_immersion(surf.chart, theta, grid, surf.sig);
    std::printf("theta\t%.17g\n", theta);
    std::printf("projection_displacement\t%.17g\n", assoc.x_theta.max_projection_displacement);
    if (!out.empty()) {
        write_mesh_obj(assoc.x_theta.nodes, grid, surf.sig, default_model(surf.sig, model_tag),
                       out);
        std::printf("mesh\t%s\t%d vertices\n", out.c_str(), grid.size());
    }
    if (std::abs(theta - M_PI / 2.0) < 1e-12) {
        if (const auto conj = known_conjugate(spec)) {
            double halfspan = -1.0;
            if (has_bounded_domain(conj->kind) && has_profile(conj->kind)) {
                const double need =
                    std::max(std::abs(grid.u_min), std::abs(grid.u_max)) + 0.05;
                halfspan = std::min(need, 0.97 * domain_halfwidth(*conj));
            }
            const Surface csurf = make_surface(*conj, 1e-4, halfspan);
            const SampledImmersion expect =
                sampled_from_chart(csurf.chart, grid, csurf.sig, grid.nu / 2, grid.nv / 2);
            const double dev = compare_up_to_isometry(
                sampled_from_reconstruction(assoc.x_theta, assoc.frames), expect);
            std::printf("conjugate\t%s:%.17g\tdeviation\t%.17g\n", family_name(conj->kind),
                        conj->parameter, dev);
        }
    }
    return 0;
}

int cmd_conjugate_check(const std::string& pair, const std::string& space, double tol,
                        double step, double halfwidth, int samples) {
    auto [a, b] = parse_pair(pair, space);
    const ConjugateReport rep = conjugate_pair_check(a, b, halfwidth, samples, step, tol);
    std::printf("quantity\tmax_deviation\n");
    std::printf("relation\t%.17g\n", rep.relation_residual);
    std::printf("shared_ode_y\t%.17g\n", rep.max_y);
    std::printf("metric\t%.17g\n", rep.max_metric);
    std::printf("S_vs_JS\t%.17g\n", rep.max_S);
    std::printf("T_vs_JT\t%.17g\n", rep.max_T);
    std::printf("nu\t%.17g\n", rep.max_nu);
    std::printf("ode_residual\t%.17g\n", rep.max_ode);
    std::printf("pass\t%s\n", rep.pass ? "yes" : "no");
    return rep.pass ? 0 : 1;
}

int cmd_reconstruct(const std::string& in, const std::string& out,
                    const std::string& model_tag, double gate) {
    const FundamentalData data = read_data_document(in);
    const ConnectionField conn = connection_from_data(data);
    const int bi = data.grid.nu / 2, bj = data.grid.nv / 2;
    const int base = data.grid.index(bi, bj);
    const Mat P = detail::orthonormal_frame(data.g[static_cast<std::size_t>(base)]);
    const Vec Tf = P.transpose() * data.g[static_cast<std::size_t>(base)] *
                   data.T[static_cast<std::size_t>(base)];
    Vec row(4);
    row << 0.0, Tf(0), Tf(1), data.nu[static_cast<std::size_t>(base)];
    const Mat A0 = complete_frame_with_last_row(row, data.sig);
    const FrameField frames = integrate_frame(conn, data, bi, bj, A0, gate);
    const ReconstructedChart rec = reconstruct_immersion(frames, data, 0.0);
    const std::vector<double> flat = flatness_residual(conn);
    const std::vector<double> zres = z_row_residual(frames, data);
    double fmax = 0.0, zmax = 0.0;
    for (int i = 1; i < data.grid.nu - 1; ++i)
        for (int j = 1; j < data.grid.nv - 1; ++j)
            fmax = std::max(fmax, flat[static_cast<std::size_t>(data.grid.index(i, j))]);
    for (double z : zres) zmax = std::max(zmax, z);
    std::printf("quantity\tvalue\n");
    std::printf("flatness_max\t%.17g\n", fmax);
    std::printf("z_row_drift_max\t%.17g\n", zmax);
    std::printf("projection_displacement\t%.17g\n", rec.max_projection_displacement);
    if (!out.empty()) {
        write_mesh_obj(rec.nodes, data.grid, data.sig, default_model(data.sig, model_tag), out);
        std::printf("mesh\t%s\t%d vertices\n", out.c_str(), data.grid.size());
    }
    return 0;
}

int cmd_hopf(const std::string& spec_str, double theta, double h) {
    const CatalogSpec spec = parse_spec(spec_str);
    const Surface surf = make_surface(spec);
    const ParameterGrid grid = grid_for(spec, h);
    const ComplexScalarField q = hopf_differential(surf.chart, grid, surf.sig);
    const std::size_t c = static_cast<std::size_t>(grid.center_index());
    const FundamentalData data = fundamental_closed_form(surf, grid);
    const ComplexScalarField Q = abresch_rosenberg(data);
    double id_dev = 0.0;
    for (std::size_t k = 0; k < q.q.size(); ++k)
        id_dev = std::max(id_dev, std::abs(Q.q[k] - 0.5 * surf.sig.kappa * q.q[k]));
    std::printf("quantity\tvalue\n");
    std::printf("Qphi_center\t%.17g%+.17gi\n", q.q[c].real(), q.q[c].imag());
    std::printf("cross_route_deviation\t%.17g\n", q.cross_route_deviation);
    std::printf("holomorphy_residual\t%.17g\n", holomorphy_residual(q));
    std::printf("Q_minus_half_kappa_Qphi\t%.17g\n", id_dev);
    const RotationLawReport rep = rotation_law_check(surf.chart, theta, grid, surf.sig);
    std::printf("theta\t%.17g\n", theta);
    std::printf("height_law_deviation\t%.17g\n", rep.max_height_dev);
    std::printf("hopf_law_deviation\t%.17g\n", rep.max_hopf_dev);
    std::printf("modulus_deviation\t%.17g\n", rep.max_modulus_dev);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for minimal surfaces in S2xR and H2xR"};
    app.require_subcommand(1);

    std::string spec_str, in_path, out_path, data_out, model_tag, pair_str, space = "s2";
    double tol = -1.0, h = 1e-2, theta = M_PI / 2.0, halfwidth = 0.5, step = 1e-4;
    int samples = 101;

    app.add_subcommand("catalog", "list the catalog surface families");

    auto* sample = app.add_subcommand("sample", "sample a catalog chart to mesh/data files");
    sample->add_option("--spec", spec_str, "family spec, e.g. s2-helicoid:1")->required();
    sample->add_option("--spacing", h, "grid spacing");
    sample->add_option("--halfwidth", halfwidth, "parameter half-width");
    sample->add_option("--out", out_path, "OBJ mesh output path");
    sample->add_option("--model", model_tag,
                       "embed4d-drop-coordinate | stereographic | poincare-disk");
    sample->add_option("--data", data_out, "fundamental-data JSON output path");

    auto* verify = app.add_subcommand("verify", "run the compatibility checker");
    verify->add_option("--spec", spec_str, "catalog spec (closed-form route)");
    verify->add_option("--in", in_path, "fundamental-data JSON document (FD route)");
    verify->add_option("--tol", tol, "tolerance (default 1e-8 analytic, 10h^2 FD)");
    verify->add_option("--spacing", h, "grid spacing for --spec");

    auto* assoc = app.add_subcommand("associate", "generate the associate immersion x_theta");
    assoc->add_option("--spec", spec_str, "catalog spec")->required();
    assoc->add_option("--theta", theta, "rotation angle (radians)");
    assoc->add_option("--spacing", h, "grid spacing");
    assoc->add_option("--out", out_path, "OBJ mesh output path");
    assoc->add_option("--model", model_tag, "mesh model tag");

    auto* conj = app.add_subcommand("conjugate-check", "verify a conjugate pair pointwise");
    conj->add_option("--pair", pair_str, "e.g. u:1.4142135,h:1 or c0,h:1")->required();
    conj->add_option("--space", space, "s2 or h2");
    conj->add_option("--tol", tol, "pass tolerance (default 1e-8)");
    conj->add_option("--step", step, "profile ODE step");
    conj->add_option("--halfwidth", halfwidth, "u half-width of the comparison interval");
    conj->add_option("--samples", samples, "number of u samples");

    auto* rec = app.add_subcommand("reconstruct", "frames pipeline on a data document");
    rec->add_option("--in", in_path, "fundamental-data JSON document")->required();
    rec->add_option("--out", out_path, "OBJ mesh output path");
    rec->add_option("--model", model_tag, "mesh model tag");
    double gate = -1.0;
    rec->add_option("--gate", gate, "flatness gate (default 10 h^2)");

    auto* hopf = app.add_subcommand("hopf", "Hopf differential and rotation laws");
    hopf->add_option("--spec", spec_str, "catalog spec")->required();
    hopf->add_option("--theta", theta, "rotation angle (radians)");
    hopf->add_option("--spacing", h, "grid spacing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand("catalog")) return cmd_catalog();
        if (app.got_subcommand(sample))
            return cmd_sample(spec_str, h, halfwidth, out_path, model_tag, data_out);
        if (app.got_subcommand(verify)) return cmd_verify(spec_str, in_path, tol, h);
        if (app.got_subcommand(assoc))
            return cmd_associate(spec_str, theta, h, out_path, model_tag);
        if (app.got_subcommand(conj))
            return cmd_conjugate_check(pair_str, space, tol < 0.0 ? 1e-8 : tol, step,
                                       halfwidth, samples);
        if (app.got_subcommand(rec)) return cmd_reconstruct(in_path, out_path, model_tag, gate);
        if (app.got_subcommand(hopf)) return cmd_hopf(spec_str, theta, h);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UnsupportedError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "failure: %s\n", e.what());
        return 1;
    }
    return 2;
}
