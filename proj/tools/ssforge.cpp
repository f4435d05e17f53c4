#include <ssforge/mesh_io.hpp>
#include <ssforge/presets.hpp>
#include <ssforge/verify.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerateDomain = 3;

struct CommonOpts {
    std::string f_src, g_src;
    double a = 0.0, b = 0.0;
    bool have_a = false, have_b = false;
    std::string domain_text;
    int nu = 64;
    double mask_gprime = 1e-8;
    double mask_detv = 1e-10;
    std::string preset;
    std::string out;
    std::string format = "obj";
    double fd_step = 1e-3;
    bool debug_linear_prefactor = false;
    std::vector<std::string> tol_overrides;
};

void add_domain_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--domain", o.domain_text,
                    "Domain: rect:u1min,u1max,u2min,u2max or annulus:rmin,rmax[,amin,amax]");
    cmd->add_option("--nu", o.nu, "Grid resolution per axis");
    cmd->add_option("--mask-gprime", o.mask_gprime, "Mask threshold on |g'|");
    cmd->add_option("--mask-detv", o.mask_detv, "Mask threshold on |detV|");
    cmd->add_option("--preset", o.preset, "Figure preset fig1..fig7");
}

std::optional<ssforge::DomainSpec> parse_domain(const std::string& text, std::string& err) {
    using namespace ssforge;
    DomainSpec dom;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> vals;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                vals.push_back(std::stod(item));
            } catch (...) {
                err = "bad number in --domain: '" + item + "'";
                return std::nullopt;
            }
        }
    }
    if (kind == "rect") {
        if (vals.size() != 4) {
            err = "rect domain needs 4 values";
            return std::nullopt;
        }
        dom.kind = DomainKind::Rectangle;
        dom.p1min = vals[0]; dom.p1max = vals[1];
        dom.p2min = vals[2]; dom.p2max = vals[3];
    } else if (kind == "annulus") {
        if (vals.size() != 2 && vals.size() != 4) {
            err = "annulus domain needs 2 or 4 values";
            return std::nullopt;
        }
        dom.kind = DomainKind::Annulus;
        dom.p1min = vals[0]; dom.p1max = vals[1];
        dom.p2min = 0.0; dom.p2max = 2.0 * std::numbers::pi;
        if (vals.size() == 4) { dom.p2min = vals[2]; dom.p2max = vals[3]; }
    } else {
        err = "unknown domain kind '" + kind + "'";
        return std::nullopt;
    }
    return dom;
}

/// Resolve target + domain from preset/flags.  Returns nullopt after printing
/// the error.
std::optional<std::pair<ssforge::VerifyTarget, ssforge::DomainSpec>>
resolve_target(const CommonOpts& o, bool rotational_cmd) {
    using namespace ssforge;
    VerifyTarget target;
    DomainSpec dom;
    bool have_target = false;
    if (!o.preset.empty()) {
        auto p = find_preset(o.preset);
        if (!p) {
            std::cerr << "error: unknown preset '" << o.preset << "'\n";
            return std::nullopt;
        }
        target = p->target;
        dom = p->domain;
        have_target = true;
    }
    if (!o.f_src.empty() || !o.g_src.empty()) {
        if (o.f_src.empty() || o.g_src.empty()) {
            std::cerr << "error: --f and --g must be given together\n";
            return std::nullopt;
        }
        try {
            target = VerifyTarget::holomorphic(o.f_src, o.g_src);
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return std::nullopt;
        }
        have_target = true;
    }
    if (o.have_a || o.have_b || (rotational_cmd && !have_target)) {
        target = VerifyTarget::rotational(o.a, o.b);
        if (o.preset.empty()) {
            dom.p1min = -1.5; dom.p1max = 1.5;
            dom.p2min = 0.0; dom.p2max = 2.0 * std::numbers::pi;
        }
        have_target = true;
    }
    if (!have_target) {
        std::cerr << "error: no target; give --f/--g, --a/--b, or --preset\n";
        return std::nullopt;
    }
    if (!o.domain_text.empty()) {
        std::string err;
        auto d = parse_domain(o.domain_text, err);
        if (!d) {
            std::cerr << "error: " << err << "\n";
            return std::nullopt;
        }
        const double mg = dom.mask_gprime, md = dom.mask_detv;
        dom = *d;
        dom.mask_gprime = mg;
        dom.mask_detv = md;
    }
    dom.nu = o.nu;
    dom.mask_gprime = o.mask_gprime;
    dom.mask_detv = o.mask_detv;
    std::string why;
    if (!dom.valid(&why)) {
        std::cerr << "error: invalid domain: " << why << "\n";
        return std::nullopt;
    }
    return std::make_pair(target, dom);
}

int run_generate(const CommonOpts& o, bool rotational_cmd) {
    using namespace ssforge;
    auto resolved = resolve_target(o, rotational_cmd);
    if (!resolved) return kExitInputError;
    auto [target, dom] = *resolved;
    if (o.out.empty()) {
        std::cerr << "error: --out is required\n";
        return kExitInputError;
    }
    SurfaceGrid grid;
    try {
        grid = evaluate_grid(target.jets(), dom);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    if (grid.regular_count() == 0) {
        std::cerr << "error: no regular points (fully masked domain)\n";
        return kExitDegenerateDomain;
    }
    bool ok = false;
    if (o.format == "csv") {
        ok = write_csv(grid, o.out);
    } else {
        const Mesh mesh = build_mesh(grid);
        if (o.format == "obj") ok = write_obj(mesh, o.out);
        else if (o.format == "ply") ok = write_ply(mesh, o.out);
        else {
            std::cerr << "error: unknown format '" << o.format << "'\n";
            return kExitInputError;
        }
    }
    if (!ok) {
        std::cerr << "error: could not write '" << o.out << "'\n";
        return kExitInputError;
    }
    double max_ss = 0.0, max_mid = 0.0;
    for (std::size_t k = 0; k < grid.z.size(); ++k) {
        if (grid.status[k] != PointStatus::Regular) continue;
        max_ss = std::fmax(max_ss, grid.evals[k].ss_residual);
        max_mid = std::fmax(max_mid, grid.evals[k].midsphere_residual);
    }
    std::printf("wrote %s (%s): %zu/%zu regular points, %zu masked\n", o.out.c_str(),
                o.format.c_str(), grid.regular_count(), grid.z.size(), grid.masked_count());
    std::printf("max residuals: ss %.3e, midsphere %.3e\n", max_ss, max_mid);
    return kExitOk;
}

int run_verify(const CommonOpts& o) {
    using namespace ssforge;
    auto resolved = resolve_target(o, false);
    if (!resolved) return kExitInputError;
    auto [target, dom] = *resolved;

    VerifyOptions opt;
    opt.fd_step = o.fd_step;
    opt.linear_prefactor_debug = o.debug_linear_prefactor;

    VerificationReport rep = run_verification(target, dom, opt);
    for (const std::string& t : o.tol_overrides) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --tol expects name=value\n";
            return kExitInputError;
        }
        const std::string name = t.substr(0, eq);
        bool found = false;
        for (CheckResult& c : rep.checks) {
            if (c.name != name) continue;
            c.tolerance = std::stod(t.substr(eq + 1));
            if (c.gated) c.pass = c.points_tested > 0 && c.max_residual <= c.tolerance;
            found = true;
        }
        if (!found) {
            std::cerr << "error: --tol names unknown check '" << name << "'\n";
            return kExitInputError;
        }
    }
    rep.pass = true;
    for (const CheckResult& c : rep.checks)
        if (c.gated && !c.pass) rep.pass = false;

    const std::string json = report_to_json(rep, target, dom, opt).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << json;
    } else {
        std::ofstream f(o.out, std::ios::binary);
        f << json;
        if (!f) {
            std::cerr << "error: could not write '" << o.out << "'\n";
            return kExitInputError;
        }
    }
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SS-surface generation and verification toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file mirroring the flags");

    CommonOpts gen_o, rot_o, ver_o;

    CLI::App* gen = app.add_subcommand("generate", "Generate a surface from f and g");
    gen->add_option("--f", gen_o.f_src, "Holomorphic expression f(z)");
    gen->add_option("--g", gen_o.g_src, "Holomorphic expression g(z)");
    add_domain_flags(gen, gen_o);
    gen->add_option("--out", gen_o.out, "Output path");
    gen->add_option("--format", gen_o.format, "obj | ply | csv");

    CLI::App* rot = app.add_subcommand("rotational", "Generate a rotational surface");
    auto* ra = rot->add_option("--a", rot_o.a, "Profile parameter a");
    auto* rb = rot->add_option("--b", rot_o.b, "Profile parameter b");
    add_domain_flags(rot, rot_o);
    rot->add_option("--out", rot_o.out, "Output path");
    rot->add_option("--format", rot_o.format, "obj | ply | csv");

    CLI::App* ver = app.add_subcommand("verify", "Run the verification suite");
    ver->add_option("--f", ver_o.f_src, "Holomorphic expression f(z)");
    ver->add_option("--g", ver_o.g_src, "Holomorphic expression g(z)");
    auto* va = ver->add_option("--a", ver_o.a, "Rotational parameter a");
    auto* vb = ver->add_option("--b", ver_o.b, "Rotational parameter b");
    add_domain_flags(ver, ver_o);
    ver->add_option("--out", ver_o.out, "Write the JSON report here instead of stdout");
    ver->add_option("--fd-step", ver_o.fd_step, "Base step of the curvature oracle");
    ver->add_option("--tol", ver_o.tol_overrides, "Override a check tolerance, name=value");
    ver->add_flag("--debug-linear-prefactor", ver_o.debug_linear_prefactor,
                  "Use the 1/(2|g'|) prefactor (negative control)");

    CLI::App* pre = app.add_subcommand("presets", "List figure presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    if (gen->parsed()) return run_generate(gen_o, false);
    if (rot->parsed()) {
        rot_o.have_a = ra->count() > 0;
        rot_o.have_b = rb->count() > 0;
        return run_generate(rot_o, true);
    }
    if (ver->parsed()) {
        ver_o.have_a = va->count() > 0;
        ver_o.have_b = vb->count() > 0;
        return run_verify(ver_o);
    }
    if (pre->parsed()) {
        for (const ssforge::Preset& p : ssforge::presets()) {
            if (p.target.kind == ssforge::VerifyTarget::Kind::Rotational)
                std::printf("%-6s rotational a=%g b=%g", p.name.c_str(),
                            p.target.rot.a, p.target.rot.b);
            else
                std::printf("%-6s f=%s g=%s", p.name.c_str(), p.target.f_text.c_str(),
                            p.target.g_text.c_str());
            std::printf("  domain %s [%g,%g]x[%g,%g]\n",
                        p.domain.kind == ssforge::DomainKind::Annulus ? "annulus" : "rect",
                        p.domain.p1min, p.domain.p1max, p.domain.p2min, p.domain.p2max);
        }
        return kExitOk;
    }
    return kExitInputError;
}
