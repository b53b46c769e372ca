#pragma once

// Command-line front end. All commands render into a buffer first, so a
// failing run leaves no partial output behind.
//
//   willmore classify | solve | curve | torus | report | check  [options]
//
// Exit codes: 0 success (including an empty result), 1 numerical failure,
// 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "willmore/checks.hpp"
#include "willmore/closing.hpp"
#include "willmore/elastica.hpp"
#include "willmore/geometry.hpp"
#include "willmore/mesh_io.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

struct JobConfig {
    std::string command;
    std::optional<double> g2, g3;
    std::optional<double> mu, lambda, nu, G;
    int m = 1;
    int n = 2;
    std::string closing_case = "sphere";
    int samples = 256;
    int res_profile = 64;
    int res_fiber = 32;
    std::string out;
    std::vector<std::string> tol;
    std::uint64_t seed = 1;
};

class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// key = value lines with %.17g numbers.
class Record
{
public:
    Record& add(const std::string& key, const std::string& value)
    {
        os_ << key << " = " << value << '\n';
        return *this;
    }
    Record& add(const std::string& key, double v) { return add(key, fmt_double(v)); }
    Record& add(const std::string& key, int v) { return add(key, std::to_string(v)); }
    Record& add(const std::string& key, cplx v) { return add(key, fmt_complex(v)); }
    Record& add(const std::string& key, bool v) { return add(key, std::string(v ? "true" : "false")); }
    Record& add(const std::string& key, const char* v) { return add(key, std::string(v)); }

    [[nodiscard]] std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

namespace detail {

struct Instance {
    std::optional<ElasticParams> params;  // given directly
    std::optional<LatticeInvariants> inv;
};

inline Instance resolve_instance(const JobConfig& c, bool required)
{
    const bool any_inv = c.g2 || c.g3;
    const bool any_par = c.mu || c.lambda || c.nu || c.G;
    if (any_inv && any_par) throw UsageError("give either --g2/--g3 or --mu/--lambda/--nu/--G, not both");
    Instance out;
    if (any_inv) {
        if (!(c.g2 && c.g3)) throw UsageError("--g2 and --g3 must be given together");
        out.inv = LatticeInvariants::make(*c.g2, *c.g3);
    } else if (any_par) {
        if (!(c.mu && c.lambda && c.nu && c.G)) throw UsageError("--mu, --lambda, --nu and --G must be given together");
        out.params = ElasticParams{*c.mu, *c.lambda, *c.nu, *c.G};
        out.inv = invariants_from_params(*out.params);
    } else if (required) {
        throw UsageError("no instance: give --g2/--g3 or --mu/--lambda/--nu/--G");
    }
    return out;
}

inline ClosingCase parse_case(const std::string& s)
{
    if (s == "sphere") return ClosingCase::Sphere;
    if (s == "hyp-orbit") return ClosingCase::HyperbolicOrbitlike;
    if (s == "hyp-wave") return ClosingCase::HyperbolicWavelike;
    throw UsageError("unknown case '" + s + "'");
}

inline Tolerances parse_tolerances(const std::vector<std::string>& items)
{
    Tolerances t;
    for (const auto& it : items) {
        const auto eq = it.find('=');
        if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got '" + it + "'");
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(it.substr(eq + 1), &used);
            if (used != it.size() - eq - 1) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw UsageError("bad tolerance value in '" + it + "'");
        }
        try {
            t.set(it.substr(0, eq), v);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return t;
}

/// A solved closed curve together with everything needed downstream.
struct Solved {
    Lattice L;
    ClosingSolution sol;
    std::optional<double> nu_search;  // set for the Willmore Hopf search
};

inline void echo_solution(Record& r, const Solved& s)
{
    const ElasticParams p = elastic_params(s.sol, s.L);
    r.add("g2", s.L.g2()).add("g3", s.L.g3()).add("disc", s.L.invariants().disc);
    r.add("mu", p.mu).add("lambda", p.lambda).add("nu", p.nu).add("G", p.G);
    r.add("E", s.sol.E).add("rho", s.sol.rho).add("m", s.sol.m).add("n", s.sol.n);
}

/// Runs the closing solver for the configured case. Returns nullopt for an
/// empty result (hyperbolic wavelike with failing criterion).
inline std::optional<Solved> solve_job(const JobConfig& c, std::ostream& err)
{
    if (c.n <= 0) throw UsageError("--n must be positive");
    if (c.closing_case == "willmore-hopf") {
        if (c.g2 || c.g3 || c.mu || c.lambda || c.nu || c.G)
            throw UsageError("willmore-hopf fixes mu = -1/2, lambda = 0, G = 1 and searches nu itself");
        auto w = solve_willmore_hopf(c.m, c.n);
        return Solved{w.L, w.sol, w.nu};
    }
    const auto inst = resolve_instance(c, true);
    const Lattice L = Lattice::from_invariants(inst.inv->g2, inst.inv->g3);
    std::optional<ClosingSolution> sol = solve_configured(L, parse_case(c.closing_case), c.m, c.n);
    if (!sol) return std::nullopt;
    if (sol->cover != 1)
        err << "warning: (m, n) = (" << c.m << ", " << c.n << ") normalized to (" << sol->m << ", " << sol->n
            << "), cover = " << sol->cover << '\n';
    return Solved{L, *sol, std::nullopt};
}

inline Provenance provenance(const Solved& s)
{
    Record r;
    echo_solution(r, s);
    Provenance out;
    std::istringstream is(r.str());
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return out;
}

inline void emit(const JobConfig& c, const std::string& text, std::ostream& out)
{
    if (c.out.empty() || c.out == "-") {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + c.out + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + c.out + "' failed");
}

inline TorusKind kind_for(const ClosingSolution& s)
{
    return s.caseTag == ClosingCase::Sphere ? TorusKind::Hopf : TorusKind::Revolution;
}

}  // namespace detail

inline int cmd_classify(const JobConfig& c, std::ostream& out)
{
    const auto inst = detail::resolve_instance(c, true);
    ElasticParams p;
    if (inst.params) {
        p = *inst.params;
    } else {
        if (inst.inv->degenerate()) throw UsageError("classification from invariants needs D != 0; give the parameters");
        p = elastic_representative(Lattice::from_invariants(inst.inv->g2, inst.inv->g3), c.G.value_or(0.0));
    }
    const auto inv = invariants_from_params(p);
    const auto k = kdv_from_params(p);
    Record r;
    r.add("g2", inv.g2).add("g3", inv.g3).add("disc", inv.disc);
    r.add("mu", p.mu).add("lambda", p.lambda).add("nu", p.nu).add("G", p.G);
    r.add("kdv_c", k.c).add("kdv_d", k.d).add("kdv_e", k.e);

    const auto roots = quartic_real_roots(p);
    r.add("p4_real_roots", static_cast<int>(roots.size()));
    for (std::size_t i = 0; i < roots.size(); ++i) r.add("p4_root_" + std::to_string(i), roots[i]);
    const auto p3 = poly::real_roots(inv.p3_coefficients());
    for (std::size_t i = 0; i < p3.size(); ++i) r.add("p3_root_" + std::to_string(i), p3[i]);

    const auto ex = real_solution_exists(p);
    r.add("exists", ex.exists).add("criterion", ex.criterion).add("boundary", ex.boundary);
    r.add("reason", ex.reason);
    if (!ex.exists) {
        r.add("verdict", "no real solution");
    } else {
        const double k0 = std::abs(roots.front()) > std::abs(roots.back()) ? roots.front() : roots.back();
        const auto cls = classify(p, k0);
        r.add("kappa0", k0).add("class", to_string(cls.tag)).add("periodic", cls.periodic);
        r.add("verdict", to_string(cls.tag));
    }
    detail::emit(c, r.str(), out);
    return kExitOk;
}

inline int cmd_solve(const JobConfig& c, std::ostream& out, std::ostream& err)
{
    const auto s = detail::solve_job(c, err);
    Record r;
    r.add("case", c.closing_case);
    if (!s) {
        const auto inst = detail::resolve_instance(c, true);
        r.add("g2", inst.inv->g2).add("g3", inst.inv->g3).add("disc", inst.inv->disc);
        r.add("result", "none").add("reason", "-wp(omega1) <= eta1/omega1, no closed curve");
        detail::emit(c, r.str(), out);
        return kExitOk;
    }
    detail::echo_solution(r, *s);
    if (s->nu_search) r.add("nu_search", *s->nu_search);
    const CurveFamily fam = elastic_family(s->sol, s->L);
    r.add("result", "closed");
    r.add("branch", s->sol.branch).add("cover", s->sol.cover);
    r.add("x0", fam.x0).add("kappa0", kappa_at_origin(fam));
    r.add("angle", 2.0 * monodromy_angle(s->sol.rho, s->L));
    r.add("residual", s->sol.residual);
    r.add("projective_closure", projective_closure_error(fam, s->sol.n));
    detail::emit(c, r.str(), out);
    return kExitOk;
}

inline int cmd_curve(const JobConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.samples < 4) throw UsageError("--samples must be at least 4");
    const auto s = detail::solve_job(c, err);
    if (!s) {
        err << "no closed curve for this instance\n";
        return kExitOk;
    }
    const CurveFamily fam = elastic_family(s->sol, s->L);
    const SpaceFormCurve curve = normalize_to_spaceform(fam, s->sol, c.samples);
    auto prov = detail::provenance(*s);
    prov.emplace_back("model", to_string(curve.model));
    std::ostringstream os;
    write_samples_csv(os, curve.samples, prov);
    detail::emit(c, os.str(), out);
    return kExitOk;
}

inline int cmd_torus(const JobConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.res_profile < 3 || c.res_fiber < 3) throw UsageError("--res needs at least 3x3");
    const auto s = detail::solve_job(c, err);
    if (!s) {
        err << "no closed curve for this instance\n";
        return kExitOk;
    }
    const CurveFamily fam = elastic_family(s->sol, s->L);
    TorusMesh mesh;
    if (detail::kind_for(s->sol) == TorusKind::Hopf) {
        // enough lift samples, and a multiple of the profile resolution
        const int per = (512 * s->sol.n + c.res_profile - 1) / c.res_profile;
        SpaceFormCurve curve = normalize_to_spaceform(fam, s->sol, 4);
        resample(curve, per * c.res_profile);
        mesh = hopf_torus_mesh(hopf_lift(curve), c.res_profile, c.res_fiber);
    } else {
        const SpaceFormCurve curve = normalize_to_spaceform(fam, s->sol, 4);
        mesh = torus_of_revolution_mesh(curve, c.res_profile, c.res_fiber);
    }
    std::ostringstream os;
    write_obj(os, mesh, detail::provenance(*s));
    detail::emit(c, os.str(), out);
    return kExitOk;
}

inline int cmd_report(const JobConfig& c, std::ostream& out, std::ostream& err)
{
    const auto s = detail::solve_job(c, err);
    Record r;
    if (!s) {
        r.add("result", "none");
        detail::emit(c, r.str(), out);
        return kExitOk;
    }
    detail::echo_solution(r, *s);
    const CurveFamily fam = elastic_family(s->sol, s->L);
    const SpaceFormCurve curve = normalize_to_spaceform(fam, s->sol, c.samples);
    const TorusKind kind = detail::kind_for(s->sol);
    const TorusReport rep = torus_report(s->sol, fam, curve, kind);
    const auto ei = energy_identity(s->sol, fam);
    r.add("kind", to_string(kind)).add("model", to_string(curve.model));
    r.add("willmore", rep.willmore).add("willmore_quadrature", rep.willmore_quadrature);
    r.add("willmore_rel_gap", std::abs(rep.willmore - rep.willmore_quadrature) / std::abs(rep.willmore));
    r.add("z1", rep.z1).add("z2", rep.z2);
    r.add("length_L", rep.length_L);
    if (kind == TorusKind::Hopf) {
        r.add("area_A", rep.area_A).add("area_A_gauss_bonnet", enclosed_area_gauss_bonnet(s->sol, fam));
    } else {
        r.add("cmc_type", to_string(cmc_classify(s->sol, s->L)));
    }
    r.add("energy_identity_lhs", ei.lhs).add("energy_identity_rhs", ei.rhs);
    detail::emit(c, r.str(), out);
    return kExitOk;
}

inline int cmd_check(const JobConfig& c, std::ostream& out)
{
    CheckConfig cfg;
    const auto inst = detail::resolve_instance(c, false);
    if (inst.inv) {
        cfg.g2 = inst.inv->g2;
        cfg.g3 = inst.inv->g3;
    }
    cfg.m = c.m;
    cfg.n = c.n;
    cfg.closing_case = detail::parse_case(c.closing_case);
    cfg.seed = c.seed;
    cfg.tol = detail::parse_tolerances(c.tol);

    const auto results = run_check_suite(cfg);
    Record r;
    r.add("g2", cfg.g2).add("g3", cfg.g3).add("case", c.closing_case).add("m", cfg.m).add("n", cfg.n);
    r.add("seed", std::to_string(cfg.seed));
    int pass = 0, fail = 0, skip = 0;
    for (const auto& res : results) {
        std::string v = std::string(to_string(res.status));
        if (res.status != CheckStatus::Skipped) v += " residual=" + fmt_double(res.residual) + " tol=" + fmt_double(res.tolerance);
        if (!res.note.empty()) v += " (" + res.note + ")";
        r.add(res.name, v);
        (res.status == CheckStatus::Pass ? pass : res.status == CheckStatus::Fail ? fail : skip) += 1;
    }
    r.add("passed", pass).add("failed", fail).add("skipped", skip);
    detail::emit(c, r.str(), out);
    return fail == 0 ? kExitOk : kExitNumerical;
}

inline int dispatch(const JobConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.command == "classify") return cmd_classify(c, out);
    if (c.command == "solve") return cmd_solve(c, out, err);
    if (c.command == "curve") return cmd_curve(c, out, err);
    if (c.command == "torus") return cmd_torus(c, out, err);
    if (c.command == "report") return cmd_report(c, out, err);
    if (c.command == "check") return cmd_check(c, out);
    throw UsageError("unknown command '" + c.command + "'");
}

inline void parse_resolution(const std::string& s, JobConfig& c)
{
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument("no separator");
        std::size_t u1 = 0, u2 = 0;
        c.res_profile = std::stoi(s.substr(0, x), &u1);
        c.res_fiber = std::stoi(s.substr(x + 1), &u2);
        if (u1 != x || u2 != s.size() - x - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw UsageError("--res expects PxQ, got '" + s + "'");
    }
}

/// Parse argv and run. Output goes to `out` (or --out), diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Constrained elastic curves in space forms and their Willmore tori", "willmore"};
    app.set_config("--config", "", "key=value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);

    JobConfig c;
    double g2 = 0, g3 = 0, mu = 0, lambda = 0, nu = 0, G = 0;
    auto* o_g2 = app.add_option("--g2", g2, "lattice invariant g2");
    auto* o_g3 = app.add_option("--g3", g3, "lattice invariant g3");
    auto* o_mu = app.add_option("--mu", mu, "length multiplier mu");
    auto* o_la = app.add_option("--lambda", lambda, "area multiplier lambda");
    auto* o_nu = app.add_option("--nu", nu, "integration constant nu");
    auto* o_G = app.add_option("--G", G, "space form curvature G");
    app.add_option("--m", c.m, "winding number");
    app.add_option("--n", c.n, "lobe number");
    app.add_option("--case", c.closing_case, "closing case")
        ->check(CLI::IsMember({"sphere", "hyp-orbit", "hyp-wave", "willmore-hopf"}));
    app.add_option("--samples", c.samples, "curve samples per period");
    std::string res;
    app.add_option("--res", res, "mesh resolution PxQ");
    app.add_option("--out", c.out, "output path, '-' for stdout");
    app.add_option("--tol", c.tol, "tolerance override NAME=VALUE");
    app.add_option("--seed", c.seed, "seed for randomized checks");

    for (const char* name : {"classify", "solve", "curve", "torus", "report", "check"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitUsage;
    }

    c.command = app.get_subcommands().front()->get_name();
    if (o_g2->count() > 0) c.g2 = g2;
    if (o_g3->count() > 0) c.g3 = g3;
    if (o_mu->count() > 0) c.mu = mu;
    if (o_la->count() > 0) c.lambda = lambda;
    if (o_nu->count() > 0) c.nu = nu;
    if (o_G->count() > 0) c.G = G;

    try {
        if (!res.empty()) parse_resolution(res, c);
        return dispatch(c, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace willmore::cli
