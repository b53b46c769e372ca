#pragma once

// Residual checks of the library invariants on one configured instance. Each
// check returns its worst residual next to the tolerance it is held to; the
// suite is what `willmore check` runs.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "willmore/closing.hpp"
#include "willmore/curvegen.hpp"
#include "willmore/elastica.hpp"
#include "willmore/geometry.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore {

enum class CheckStatus { Pass, Fail, Skipped };

constexpr const char* to_string(CheckStatus s) noexcept
{
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

/// Named tolerances; `--tol NAME=VALUE` overrides entries.
class Tolerances
{
public:
    Tolerances()
        : values_{{"ode", 1e-9},       {"fd", 1e-6},       {"quasi", 1e-9},   {"parity", 1e-10},
                  {"reality", 1e-10},  {"legendre", 1e-10}, {"periods", 1e-9}, {"kdv_coeffs", 1e-12},
                  {"resolvent", 1e-9}, {"boundary", 1e-10}, {"wronskian", 1e-8}, {"eq2", 1e-7},
                  {"kdv", 1e-7},       {"miura", 1e-7},    {"closing", 1e-9}, {"closure", 1e-6},
                  {"purity", 1e-10},   {"speed", 1e-7},    {"energy", 1e-5},  {"willmore", 1e-5},
                  {"area", 1e-5},      {"horizontal", 1e-7}, {"mesh", 1e-3}}
    {
    }

    [[nodiscard]] double operator[](const std::string& name) const { return values_.at(name); }

    void set(const std::string& name, double value)
    {
        if (!values_.contains(name)) throw std::invalid_argument("unknown tolerance '" + name + "'");
        values_[name] = value;
    }

    [[nodiscard]] const std::map<std::string, double>& all() const noexcept { return values_; }

private:
    std::map<std::string, double> values_;
};

namespace checks {

inline CheckResult make(std::string name, double residual, double tol, std::string note = {})
{
    return {std::move(name), residual <= tol ? CheckStatus::Pass : CheckStatus::Fail, residual, tol,
            std::move(note)};
}

inline CheckResult skipped(std::string name, std::string note)
{
    return {std::move(name), CheckStatus::Skipped, 0.0, 0.0, std::move(note)};
}

/// Uniform points of the fundamental cell at distance >= margin |omega1|
/// from the lattice.
inline std::vector<cplx> cell_samples(const Lattice& L, std::mt19937_64& rng, int count, double margin = 0.05)
{
    const auto [wa, wb] = L.half_generators();
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<cplx> out;
    while (static_cast<int>(out.size()) < count) {
        const cplx z = 2.0 * u(rng) * wa + 2.0 * u(rng) * wb;
        if (L.distance_to_lattice(z) >= margin * L.omega1()) out.push_back(z);
    }
    return out;
}

/// (wp')^2 = 4 wp^3 - g2 wp - g3 with the given invariants, relative to
/// max(1, |wp|^3).
inline double wp_ode_residual(const Lattice& L, double g2, double g3, const std::vector<cplx>& zs)
{
    double worst = 0.0;
    for (cplx z : zs) {
        const cplx p = L.wp(z);
        const cplx dp = L.wp_prime(z);
        const cplx r = dp * dp - 4.0 * p * p * p + g2 * p + g3;
        worst = std::max(worst, std::abs(r) / std::max(1.0, std::pow(std::abs(p), 3)));
    }
    return worst;
}

inline double zeta_derivative_residual(const Lattice& L, const std::vector<cplx>& zs, double h = 1e-5)
{
    double worst = 0.0;
    for (cplx z : zs) {
        const cplx d = (L.zeta(z + h) - L.zeta(z - h)) / (2.0 * h);
        const cplx p = L.wp(z);
        worst = std::max(worst, std::abs(d + p) / std::max(1.0, std::abs(p)));
    }
    return worst;
}

inline double log_sigma_derivative_residual(const Lattice& L, const std::vector<cplx>& zs, double h = 1e-5)
{
    double worst = 0.0;
    for (cplx z : zs) {
        const cplx d = (L.log_sigma(z + h) - L.log_sigma(z - h)) / (2.0 * h);
        const cplx zt = L.zeta(z);
        worst = std::max(worst, std::abs(d - zt) / std::max(1.0, std::abs(zt)));
    }
    return worst;
}

/// zeta(z + 2w1) = zeta(z) + 2 eta1 and sigma(z + 2w1) = -sigma(z) exp(2 eta1 (z + w1)).
inline double quasi_periodicity_residual(const Lattice& L, const std::vector<cplx>& zs)
{
    const double w = L.omega1();
    const double e = L.eta1();
    double worst = 0.0;
    for (cplx z : zs) {
        const cplx zl = L.zeta(z);
        worst = std::max(worst, std::abs(L.zeta(z + 2.0 * w) - zl - 2.0 * e) / std::max(1.0, std::abs(zl)));
        const cplx s0 = L.sigma(z);
        const cplx s1 = L.sigma(z + 2.0 * w);
        const cplx expect = -s0 * std::exp(2.0 * e * (z + w));
        worst = std::max(worst, std::abs(s1 - expect) / std::abs(expect));
    }
    return worst;
}

inline double parity_residual(const Lattice& L, const std::vector<cplx>& zs)
{
    double worst = 0.0;
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    for (cplx z : zs) {
        worst = std::max(worst, rel(L.wp(-z), L.wp(z)));
        worst = std::max(worst, rel(L.wp_prime(-z), -L.wp_prime(z)));
        worst = std::max(worst, rel(L.zeta(-z), -L.zeta(z)));
        worst = std::max(worst, rel(L.sigma(-z), -L.sigma(z)));
    }
    return worst;
}

/// Relative imaginary part of wp on the real segment (0, 2 omega1).
inline double reality_residual(const Lattice& L, int count = 200)
{
    double worst = 0.0;
    for (int j = 1; j < count; ++j) {
        const double x = 2.0 * L.omega1() * j / count;
        const cplx p = L.wp(x);
        worst = std::max(worst, std::abs(p.imag()) / std::max(1.0, std::abs(p)));
    }
    return worst;
}

/// eta1 omega3 - eta3 omega1 against its exact value (pi i / 2 for D > 0,
/// pi i for D < 0) and the reduced-basis relation eta_a w_b - eta_b w_a = pi i / 2.
inline double legendre_residual(const Lattice& L)
{
    const double pi = std::numbers::pi;
    const cplx expect = L.orbitlike() ? cplx(0.0, pi / 2.0) : cplx(0.0, pi);
    const double r1 = std::abs(L.eta1() * L.omega3() - L.eta3() * L.omega1() - expect);
    const auto [wa, wb] = L.half_generators();
    const auto [ea, eb] = L.generator_etas();
    const double r2 = std::abs(ea * wb - eb * wa - cplx(0.0, pi / 2.0));
    return std::max(r1, r2);
}

/// wp(omega1) = largest real root of P3, wp(omega3) = smallest.
inline double half_period_residual(const Lattice& L)
{
    const double s = 1.0 + std::abs(L.e1()) + std::abs(L.e3());
    return std::max(std::abs(L.wp(L.omega1()) - L.e1()), std::abs(L.wp(L.omega3()) - L.e3())) / s;
}

inline double kdv_coeffs_residual(const ElasticParams& p)
{
    const auto a = invariants_from_params(p);
    const auto b = invariants_from_kdv(kdv_from_params(p));
    const double s = 1.0 + std::abs(a.g2) + std::abs(a.g3);
    return std::max(std::abs(a.g2 - b.g2), std::abs(a.g3 - b.g3)) / s;
}

/// Resolvent roots carried by 16x = s + (8/3)(mu+G) against roots of P3.
inline double resolvent_residual(const ElasticParams& p)
{
    const auto c = cubic_resolvent(p);
    const auto rs = poly::roots(std::array<double, 4>{c[2], c[1], c[0], 1.0});
    const auto inv = invariants_from_params(p);
    const auto ps = poly::roots(inv.p3_coefficients());
    double worst = 0.0;
    for (const auto& r : rs) {
        const cplx x = (r.value + 8.0 / 3.0 * p.mu_plus_G()) / 16.0;
        double best = INFINITY;
        for (const auto& q : ps) best = std::min(best, std::abs(x - q.value));
        worst = std::max(worst, best / (1.0 + std::abs(x)));
    }
    return worst;
}

inline double wronskian_residual(const CurveFamily& fam, double length, int count = 200)
{
    const cplx w0 = wronskian_closed_form(fam);
    double worst = 0.0;
    for (int j = 0; j <= count; ++j) {
        const double x = length * j / count;
        worst = std::max(worst, std::abs(wronskian(x, fam) - w0) / std::abs(w0));
    }
    return worst;
}

/// (kappa')^2 + P4(kappa) relative to the size of the terms.
inline double eq2_residual(const CurveFamily& fam, const ElasticParams& p, double length, int count = 1000)
{
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        const double x = length * j / count;
        const double k = kappa(x, fam, p);
        const double dk = kappa_prime(x, fam);
        const double scale = 1.0 + dk * dk + 0.25 * std::pow(k, 4) + std::abs(p.mu_plus_G()) * k * k +
                             2.0 * std::abs(p.lambda * k) + std::abs(p.nu);
        worst = std::max(worst, std::abs(dk * dk + p.p4(k)) / scale);
    }
    return worst;
}

/// Stationary KdV residual of the Miura image q of kappa.
inline double kdv_grid_residual(const CurveFamily& fam, const ElasticParams& p, double length, int count = 1000)
{
    const auto kc = kdv_from_params(p);
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        const double x = length * j / count;
        const double k = kappa(x, fam, p);
        const double dk = kappa_prime(x, fam);
        const double ddk = kappa_second(x, fam);
        const cplx q = miura(k, dk, p.G);
        const cplx dq(0.5 * k * dk, 0.5 * ddk);
        const double scale = 1.0 + std::norm(dq) + 2.0 * std::pow(std::abs(q), 3) + std::abs(kc.c) * std::norm(q) +
                             2.0 * std::abs(kc.d * q) + std::abs(kc.e);
        worst = std::max(worst, std::abs(kdv_residual(q, dq, kc)) / scale);
    }
    return worst;
}

/// Miura image against the Schwarzian of the curve family.
inline double miura_schwarzian_residual(const CurveFamily& fam, const ElasticParams& p, double length,
                                        int count = 1000)
{
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        const double x = length * j / count;
        const cplx q = miura(kappa(x, fam, p), kappa_prime(x, fam), p.G);
        const cplx s = schwarzian(x, fam);
        worst = std::max(worst, std::abs(q - s) / (1.0 + std::abs(s)));
    }
    return worst;
}

/// |Re g| along the imaginary axis and along omega1 + i R.
inline double purity_residual(const Lattice& L, int count = 64)
{
    const double top = std::abs(L.omega3());
    double worst = 0.0;
    for (int j = 1; j < count; ++j) {
        const double t = top * j / count;
        worst = std::max(worst, std::abs(monodromy_angle(cplx(0.0, t), L).real()));
        if (L.orbitlike()) worst = std::max(worst, std::abs(monodromy_angle(cplx(L.omega1(), t), L).real()));
    }
    return worst;
}

}  // namespace checks

struct CheckConfig {
    double g2 = 4.0;
    double g3 = 0.0;
    int m = 1;
    int n = 2;
    ClosingCase closing_case = ClosingCase::Sphere;
    std::uint64_t seed = 1;
    Tolerances tol;
};

/// Solve the configured closing problem; empty when the case has no solution.
[[nodiscard]] inline std::optional<ClosingSolution> solve_configured(const Lattice& L, ClosingCase c, int m, int n)
{
    switch (c) {
        case ClosingCase::Sphere: return solve_closing_sphere(L, m, n);
        case ClosingCase::HyperbolicOrbitlike: return solve_closing_hyperbolic_orbitlike(L, m, n);
        case ClosingCase::HyperbolicWavelike: return solve_closing_hyperbolic_wavelike(L);
    }
    return std::nullopt;
}

[[nodiscard]] inline std::vector<CheckResult> run_check_suite(const CheckConfig& cfg)
{
    using namespace checks;
    const Tolerances& tol = cfg.tol;
    std::vector<CheckResult> out;

    const auto inv = LatticeInvariants::make(cfg.g2, cfg.g3);
    out.push_back(make("weierstrass.discriminant", std::abs(inv.disc - discriminant(cfg.g2, cfg.g3)), 0.0));

    static const char* elliptic[] = {"weierstrass.ode",       "weierstrass.zeta_derivative",
                                     "weierstrass.log_sigma_derivative", "weierstrass.quasi_periodicity",
                                     "weierstrass.parity",    "weierstrass.reality",
                                     "weierstrass.legendre",  "weierstrass.half_periods",
                                     "elastica.kdv_coeffs",   "elastica.resolvent",
                                     "elastica.boundary",     "curvegen.wronskian",
                                     "curvegen.eq2",          "curvegen.kdv",
                                     "curvegen.miura",        "closing.purity",
                                     "closing.angle",         "closing.projective",
                                     "geometry.speed",        "geometry.energy_identity",
                                     "geometry.willmore",     "geometry.area",
                                     "geometry.hopf_horizontal", "geometry.hopf_flatness",
                                     "geometry.hopf_mean_curvature"};
    if (inv.degenerate()) {
        for (const char* name : elliptic) out.push_back(skipped(name, "degenerate"));
        return out;
    }

    const Lattice L = Lattice::from_invariants(cfg.g2, cfg.g3);
    std::mt19937_64 rng(cfg.seed);
    const auto zs = cell_samples(L, rng, 200);
    out.push_back(make("weierstrass.ode", wp_ode_residual(L, L.g2(), L.g3(), zs), tol["ode"]));
    out.push_back(make("weierstrass.zeta_derivative", zeta_derivative_residual(L, zs), tol["fd"]));
    out.push_back(make("weierstrass.log_sigma_derivative", log_sigma_derivative_residual(L, zs), tol["fd"]));
    out.push_back(make("weierstrass.quasi_periodicity", quasi_periodicity_residual(L, zs), tol["quasi"]));
    out.push_back(make("weierstrass.parity", parity_residual(L, zs), tol["parity"]));
    out.push_back(make("weierstrass.reality", reality_residual(L), tol["reality"]));
    out.push_back(make("weierstrass.legendre", legendre_residual(L), tol["legendre"]));
    out.push_back(make("weierstrass.half_periods", half_period_residual(L), tol["periods"]));

    const ElasticParams rep = elastic_representative(L);
    out.push_back(make("elastica.kdv_coeffs", kdv_coeffs_residual(rep), tol["kdv_coeffs"]));
    out.push_back(make("elastica.resolvent", resolvent_residual(rep), tol["resolvent"]));
    const auto p3roots = poly::real_roots(invariants_from_params(rep).p3_coefficients());
    out.push_back(make("elastica.boundary", std::abs(rep.mu_plus_G() / 6.0 - p3roots.front()) /
                                                (1.0 + std::abs(p3roots.front())),
                       tol["boundary"]));
    out.push_back(make("closing.purity", purity_residual(L), tol["purity"]));

    std::optional<ClosingSolution> sol;
    std::string why;
    try {
        sol = solve_configured(L, cfg.closing_case, cfg.m, cfg.n);
        if (!sol) why = "no closed curve for this instance";
    } catch (const Error& e) {
        why = e.what();
    }
    static const char* curve_checks[] = {"curvegen.wronskian", "curvegen.eq2",      "curvegen.kdv",
                                         "curvegen.miura",     "closing.angle",     "closing.projective",
                                         "geometry.speed",     "geometry.energy_identity",
                                         "geometry.willmore"};
    if (!sol) {
        for (const char* name : curve_checks) out.push_back(skipped(name, why));
        return out;
    }

    const CurveFamily fam = elastic_family(*sol, L);
    const ElasticParams p = params_of_family(fam);
    const double len = 2.0 * sol->n * L.omega1();
    out.push_back(make("curvegen.wronskian", wronskian_residual(fam, len), tol["wronskian"]));
    out.push_back(make("curvegen.eq2", eq2_residual(fam, p, len), tol["eq2"]));
    out.push_back(make("curvegen.kdv", kdv_grid_residual(fam, p, len), tol["kdv"]));
    out.push_back(make("curvegen.miura", miura_schwarzian_residual(fam, p, len), tol["miura"]));
    out.push_back(make("closing.angle", sol->residual, tol["closing"]));
    out.push_back(make("closing.projective", projective_closure_error(fam, sol->n), tol["closure"]));

    const SpaceFormCurve curve = normalize_to_spaceform(fam, *sol, 1024);
    out.push_back(make("geometry.speed", max_speed_error(curve, 1000), tol["speed"]));
    const auto ei = energy_identity(*sol, fam);
    out.push_back(make("geometry.energy_identity", std::abs(ei.lhs - ei.rhs) / std::abs(ei.rhs), tol["energy"]));
    const TorusKind kind = sol->caseTag == ClosingCase::Sphere ? TorusKind::Hopf : TorusKind::Revolution;
    const double W = willmore_energy(*sol, L, kind);
    const double Wq = willmore_energy_quadrature(curve, kind);
    out.push_back(make("geometry.willmore", std::abs(W - Wq) / std::abs(W), tol["willmore"]));

    if (kind == TorusKind::Hopf) {
        const double a1 = enclosed_area(*sol, fam);
        const double a2 = enclosed_area_gauss_bonnet(*sol, fam);
        out.push_back(make("geometry.area", 0.5 * sol->G * area_distance(sol->G, a1, a2), tol["area"],
                           "(G/2) A mod 2 pi"));
        const HopfLift lift = hopf_lift(curve);
        out.push_back(make("geometry.hopf_horizontal", horizontality_defect(lift), tol["horizontal"]));
        const auto hc = hopf_curvature_check(lift, 256);
        out.push_back(make("geometry.hopf_flatness", hc.max_gauss, tol["mesh"]));
        out.push_back(make("geometry.hopf_mean_curvature", hc.max_mean_deviation, tol["mesh"]));
    } else {
        for (const char* name : {"geometry.area", "geometry.hopf_horizontal", "geometry.hopf_flatness",
                                 "geometry.hopf_mean_curvature"})
            out.push_back(skipped(name, "hyperbolic profile"));
    }
    return out;
}

[[nodiscard]] inline bool all_passed(const std::vector<CheckResult>& rs)
{
    return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.status != CheckStatus::Fail; });
}

}  // namespace willmore
