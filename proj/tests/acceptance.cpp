// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "willmore/cli.hpp"
#include "willmore/willmore.hpp"

using namespace willmore;
using std::numbers::pi;

namespace {

struct Verdict {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct Case {
    std::string label;
    Lattice L;
    ClosingSolution sol;
    CurveFamily fam;
};

const std::vector<std::pair<double, double>> kLattices = {{4.0, 0.0}, {0.0, -4.0}, {1.0, 1.0}, {5.0, 1.0}};

std::vector<Case> solved_cases()
{
    std::vector<Case> out;
    auto add = [&](std::string label, const Lattice& L, const ClosingSolution& s) {
        out.push_back({std::move(label), L, s, elastic_family(s, L)});
    };
    const auto lem = Lattice::from_invariants(4.0, 0.0);
    add("sphere (4,0) m=1 n=2", lem, solve_closing_sphere(lem, 1, 2));
    add("hyp-orbit (4,0) m=1 n=2", lem, solve_closing_hyperbolic_orbitlike(lem, 1, 2));
    const auto wav = Lattice::from_invariants(0.0, -4.0);
    add("hyp-wave (0,-4)", wav, *solve_closing_hyperbolic_wavelike(wav));
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// largest real root of 4t^3 - g2 t - g3 by bracketing
double largest_root(double g2, double g3)
{
    auto P = [&](double t) { return 4.0 * t * t * t - g2 * t - g3; };
    const double R = 1.0 + std::max(std::abs(g2), std::abs(g3));
    const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
    const double lo = disc > 0.0 ? std::sqrt(g2 / 12.0) : -R;
    std::uintmax_t it = 200;
    const auto r = boost::math::tools::toms748_solve(P, lo, R, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

Verdict criterion1()
{
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const Tolerances tol;
    double worst_ode = 0, worst_zeta = 0, worst_quasi = 0, worst_leg = 0;
    for (const auto& [g2, g3] : kLattices) {
        const auto L = Lattice::from_invariants(g2, g3);
        std::mt19937_64 rng(1);
        const auto zs = checks::cell_samples(L, rng, 200);
        worst_ode = std::max(worst_ode, checks::wp_ode_residual(L, g2, g3, zs));
        worst_zeta = std::max(worst_zeta, checks::zeta_derivative_residual(L, zs));
        worst_quasi = std::max(worst_quasi, checks::quasi_periodicity_residual(L, zs));
        worst_leg = std::max(worst_leg, checks::legendre_residual(L));
    }
    const double dt = seconds_since(t0);
    v.require(worst_ode <= tol["ode"], "ode");
    v.require(worst_zeta <= tol["fd"], "zeta'");
    v.require(worst_quasi <= tol["quasi"], "sigma quasi-periodicity");
    v.require(worst_leg <= tol["legendre"], "legendre");
    v.require(dt < 5.0, "runtime");
    v.detail << "ode=" << worst_ode << " zeta'=" << worst_zeta << " sigma=" << worst_quasi << " legendre=" << worst_leg
             << " time=" << dt << "s";
    return v;
}

Verdict criterion2()
{
    Verdict v;
    double worst = 0.0;
    boost::math::quadrature::exp_sinh<double> integrator;
    for (const auto& [g2, g3] : kLattices) {
        const double e1 = largest_root(g2, g3);
        // t = e1 + s^2 removes the endpoint singularity
        auto f = [&](double s) {
            const double t = e1 + s * s;
            return 1.0 / std::sqrt(t * t + e1 * t + e1 * e1 - g2 / 4.0);
        };
        const double oracle = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
        const double w1 = Lattice::from_invariants(g2, g3).omega1();
        worst = std::max(worst, std::abs(w1 - oracle) / oracle);
    }
    v.require(worst <= 1e-8, "omega1");
    v.detail << "max rel err=" << worst;
    return v;
}

Verdict criterion3(const std::vector<Case>& cases)
{
    Verdict v;
    for (const auto& c : cases) {
        const auto p = params_of_family(c.fam);
        const double len = 2.0 * c.sol.n * c.L.omega1();
        const double kdv = checks::kdv_grid_residual(c.fam, p, len, 1000);
        const double eq2 = checks::eq2_residual(c.fam, p, len, 1000);
        v.require(kdv <= 1e-7 && eq2 <= 1e-7, c.label);
        v.detail << c.label << ": kdv=" << kdv << " eq2=" << eq2 << "; ";
    }
    return v;
}

Verdict criterion4(const std::vector<Case>& cases)
{
    Verdict v;
    std::vector<Case> all = cases;
    const auto lem = Lattice::from_invariants(4.0, 0.0);
    for (const auto& [m, n] : {std::pair{1, 3}, std::pair{2, 5}, std::pair{3, 4}}) {
        const auto s = solve_closing_sphere(lem, m, n);
        all.push_back({"sphere (4,0) m=" + std::to_string(m) + " n=" + std::to_string(n), lem, s,
                       elastic_family(s, lem)});
    }
    const auto wh = solve_willmore_hopf(1, 2);
    all.push_back({"willmore-hopf m=1 n=2", wh.L, wh.sol, elastic_family(wh.sol, wh.L)});
    double worst_closure = 0.0, worst_angle = 0.0;
    for (const auto& c : all) {
        const cplx rho = c.sol.rho;
        const cplx two_g = 2.0 * c.L.eta1() * rho - 2.0 * c.L.zeta(rho) * c.L.omega1();
        const double angle = std::abs(two_g - cplx(0.0, pi * c.sol.target()));
        const double closure = projective_closure_error(c.fam, c.sol.n);
        worst_angle = std::max(worst_angle, angle);
        worst_closure = std::max(worst_closure, closure);
        v.require(closure <= 1e-6 && angle <= 1e-9, c.label);
        v.detail << c.label << " k=" << c.sol.branch << "; ";
    }
    v.detail << "max closure=" << worst_closure << " max angle=" << worst_angle;
    return v;
}

Verdict criterion5(const std::vector<Case>& cases)
{
    Verdict v;
    std::vector<Case> all = cases;
    const auto wh = solve_willmore_hopf(1, 2);
    all.push_back({"willmore-hopf m=1 n=2", wh.L, wh.sol, elastic_family(wh.sol, wh.L)});
    bool hopf = false, revolution = false;
    for (const auto& c : all) {
        const auto ei = energy_identity(c.sol, c.fam);
        const double id = std::abs(ei.lhs - ei.rhs) / std::abs(ei.rhs);
        const TorusKind kind = c.sol.caseTag == ClosingCase::Sphere ? TorusKind::Hopf : TorusKind::Revolution;
        const double W = willmore_energy(c.sol, c.L, kind);
        const double Wq = willmore_energy_quadrature(normalize_to_spaceform(c.fam, c.sol), kind);
        const double gap = std::abs(W - Wq) / std::abs(W);
        v.require(id <= 1e-5 && gap <= 1e-5, c.label);
        (kind == TorusKind::Hopf ? hopf : revolution) = true;
        v.detail << c.label << ": identity=" << id << " W=" << W << " gap=" << gap << "; ";
    }
    v.require(hopf && revolution, "both torus kinds");
    return v;
}

Verdict criterion6(const std::vector<Case>& cases)
{
    Verdict v;
    const auto& c = cases.front();
    v.require(c.sol.caseTag == ClosingCase::Sphere && c.sol.m == 1 && c.sol.n == 2, "instance");
    const double a = enclosed_area(c.sol, c.fam);
    const double b = enclosed_area_gauss_bonnet(c.sol, c.fam);
    const double d = 0.5 * c.sol.G * area_distance(c.sol.G, a, b);
    v.require(d <= 1e-5, "areas");
    v.detail << "A=" << a << " A_gb=" << b << " (G/2)|dA| mod 2pi=" << d;
    return v;
}

std::string classify_verdict(double mu, double lambda, double nu, double G)
{
    const std::vector<std::string> args = {"willmore",          "classify", "--mu", fmt_double(mu), "--lambda",
                                           fmt_double(lambda), "--nu",     fmt_double(nu), "--G", fmt_double(G)};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) return "error";
    const std::string s = out.str();
    const auto at = s.find("verdict = ");
    return at == std::string::npos ? "" : s.substr(at + 10, s.find('\n', at) - at - 10);
}

int sign_changes_on_real_segment(const Lattice& L, int N)
{
    int changes = 0;
    double prev = 0.0;
    for (int j = 0; j < N; ++j) {
        const double h = monodromy_angle(cplx(L.omega1() * (j + 0.5) / N, 0.0), L).real();
        if (j > 0 && (h > 0.0) != (prev > 0.0)) ++changes;
        prev = h;
    }
    return changes;
}

Verdict criterion7()
{
    Verdict v;
    int free_cases = 0, hopf_cases = 0;
    for (double nu = 0.01; nu < 100.0; nu *= 1.7) {
        ++free_cases;
        v.require(classify_verdict(0.0, 0.0, nu, 1.0) == "no real solution", "free elastic nu=" + fmt_double(nu));
    }
    for (const double G : {0.5, 1.0, 4.0}) {
        for (double nu = 1e-3; nu < 1e3; nu *= 2.3) {
            if (!(invariants_from_params({-G / 2.0, 0.0, nu, G}).disc > 0.0)) continue;
            ++hopf_cases;
            v.require(classify_verdict(-G / 2.0, 0.0, nu, G) == "no real solution",
                      "willmore-hopf G=" + fmt_double(G) + " nu=" + fmt_double(nu));
        }
    }
    const auto none = Lattice::from_invariants(1.0, 1.0);
    const auto one = Lattice::from_invariants(0.0, -4.0);
    v.require(!wavelike_closing_criterion(none) && !solve_closing_hyperbolic_wavelike(none), "(1,1) none");
    v.require(wavelike_closing_criterion(one) && solve_closing_hyperbolic_wavelike(one).has_value(), "(0,-4) one");
    const int c_none = sign_changes_on_real_segment(none, 4000);
    const int c_one = sign_changes_on_real_segment(one, 4000);
    v.require(c_none == 0 && c_one == 1, "root counts");
    int agree = 0, total = 0;
    for (double g2 = -3.0; g2 <= 3.0; g2 += 0.75) {
        for (const double g3 : {-4.0, -1.0, -0.25, 0.25, 1.0, 4.0}) {
            if (!(g2 * g2 * g2 - 27.0 * g3 * g3 < -1e-6)) continue;
            const auto L = Lattice::from_invariants(g2, g3);
            const int ch = sign_changes_on_real_segment(L, 2000);
            ++total;
            agree += ch <= 1 && (ch == 1) == wavelike_closing_criterion(L);
        }
    }
    v.require(agree == total, "criterion vs scan");
    v.detail << free_cases << " free elastic and " << hopf_cases << " willmore-hopf instances excluded; "
             << "(1,1) roots=" << c_none << " (0,-4) roots=" << c_one << "; criterion matches scan on " << agree
             << "/" << total << " lattices";
    return v;
}

Verdict criterion8()
{
    Verdict v;
    const auto wh = solve_willmore_hopf(1, 2);
    const auto fam = elastic_family(wh.sol, wh.L);
    const auto p = params_of_family(fam);
    v.require(wh.L.wavelike(), "wavelike lattice");
    v.require(std::abs(p.mu + 0.5) <= 1e-9 && std::abs(p.lambda) <= 1e-9, "mu, lambda");
    const double closure = projective_closure_error(fam, wh.sol.n);
    v.require(closure <= 1e-6, "closure");
    const auto curve = normalize_to_spaceform(fam, wh.sol, 1024);
    const auto lift = hopf_lift(curve);
    const auto chk = hopf_curvature_check(lift);
    const auto mesh = hopf_torus_mesh(lift, 64, 32);
    v.require(chk.max_gauss <= 1e-3 && chk.max_mean_deviation <= 1e-3, "flatness / mean curvature");
    v.require(mesh.vertices.size() == 64u * 32u, "mesh");
    v.detail << "nu=" << wh.nu << " mu=" << p.mu << " lambda=" << p.lambda << " G=" << p.G << " closure=" << closure
             << " K=" << chk.max_gauss << " H dev=" << chk.max_mean_deviation;
    return v;
}

Verdict criterion9(const std::vector<Case>& cases)
{
    Verdict v;
    const auto lem = Lattice::from_invariants(4.0, 0.0);
    int matched = 0, s3 = 0, large = 0;
    for (int j = -120; j <= 120; ++j) {
        const double E = j / 40.0 + 0.0123;
        const double P3 = 4.0 * E * E * E - 4.0 * E;
        const CMCType expected = P3 < 0.0 ? CMCType::S3 : CMCType::H3_large_H;
        const CMCType got = cmc_classify(E, lem);
        matched += got == expected;
        (expected == CMCType::S3 ? s3 : large) += 1;
    }
    v.require(matched == 241, "orbitlike sweep");
    int wave = 0;
    for (const auto& [g2, g3] : {std::pair{0.0, -4.0}, std::pair{1.0, 1.0}, std::pair{-2.0, 0.5}}) {
        const auto L = Lattice::from_invariants(g2, g3);
        for (const double E : {-3.0, -0.2, 0.7, 5.0}) wave += cmc_classify(E, L) == CMCType::H3_small_H;
    }
    v.require(wave == 12, "wavelike");
    v.require(cmc_classify(cases[2].sol, cases[2].L) == CMCType::H3_small_H, "solved wavelike");
    v.detail << matched << "/241 orbitlike verdicts match sign(P3) (S3=" << s3 << ", H3_large_H=" << large << "); "
             << wave << "/12 wavelike give H3_small_H";
    return v;
}

std::string run_binary(const std::string& args, int& status)
{
    const auto path = std::filesystem::temp_directory_path() / "willmore_acceptance.out";
    const std::string line = "\"" WILLMORE_CLI_PATH "\" " + args + " > \"" + path.string() + "\" 2>/dev/null";
    const int s = std::system(line.c_str());
    status = WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict criterion10()
{
    Verdict v;
    const char* jobs[] = {"check --seed 7",
                          "check --g2 0 --g3 -4 --case hyp-wave --seed 7",
                          "check --g2 4 --g3 0 --case hyp-orbit --seed 7",
                          "torus --case willmore-hopf --res 32x16",
                          "report --g2 4 --g3 0"};
    for (const char* job : jobs) {
        int s1 = -1, s2 = -1;
        const std::string a = run_binary(job, s1);
        const std::string b = run_binary(job, s2);
        v.require(s1 == 0 && s2 == 0, std::string(job) + " exit");
        v.require(!a.empty() && a == b, std::string(job) + " bytes");
        if (std::string(job).rfind("check", 0) == 0) v.require(a.find("failed = 0\n") != std::string::npos, job);
    }
    v.detail << "5 jobs byte-identical, check suites green";
    return v;
}

}  // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Case> cases;
    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Verdict()>& f) {
        Verdict v;
        try {
            v = f();
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail << "exception: " << e.what();
        }
        failures += !v.ok;
        std::printf("%s %2d %s: %s\n", v.ok ? "PASS" : "FAIL", n, title, v.detail.str().c_str());
        std::fflush(stdout);
    };

    try {
        cases = solved_cases();
    } catch (const std::exception& e) {
        std::printf("FAIL setup: %s\n", e.what());
        return 1;
    }
    report(1, "elliptic kernel", criterion1);
    report(2, "period oracle", criterion2);
    report(3, "miura/kdv consistency", [&] { return criterion3(cases); });
    report(4, "closing verification", [&] { return criterion4(cases); });
    report(5, "energy identity and willmore energies", [&] { return criterion5(cases); });
    report(6, "area cross-check", [&] { return criterion6(cases); });
    report(7, "exclusion results", criterion7);
    report(8, "willmore-hopf curve and hopf torus", criterion8);
    report(9, "cmc classification", [&] { return criterion9(cases); });
    report(10, "determinism", [&] {
        auto v = criterion10();
        const double elapsed = seconds_since(t0);
        v.require(elapsed < 60.0, "runtime");
        v.detail << "; total " << elapsed << "s";
        return v;
    });
    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
