#pragma once

// Closing conditions for the curve family. Over one period 2 omega1 the two
// lift components pick up multipliers whose ratio is exp(4 g(rho)) with
//
//   g(rho) = eta1 rho - zeta(rho) omega1,
//
// so the projective curve closes after n periods iff 2 g(rho) = (m/n) pi i
// modulo pi i. Solutions carry the integer branch k with
// 2 g(rho) = (m/n + k) pi i.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "willmore/curvegen.hpp"
#include "willmore/elastica.hpp"
#include "willmore/errors.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore {

enum class ClosingCase { Sphere, HyperbolicOrbitlike, HyperbolicWavelike };

constexpr const char* to_string(ClosingCase c) noexcept
{
    switch (c) {
        case ClosingCase::Sphere: return "sphere";
        case ClosingCase::HyperbolicOrbitlike: return "hyp-orbit";
        case ClosingCase::HyperbolicWavelike: return "hyp-wave";
    }
    return "unknown";
}

struct ClosingSolution {
    int m = 0;
    int n = 1;
    int cover = 1;   // gcd of the requested pair
    int branch = 0;  // k in 2g = (m/n + k) pi i
    cplx rho{};
    double E = 0.0;
    double G = 0.0;
    double mu = 0.0;
    ClosingCase caseTag = ClosingCase::Sphere;
    double residual = 0.0;  // |2g(rho) - (m/n + k) pi i|

    [[nodiscard]] double target() const noexcept { return static_cast<double>(m) / n + branch; }
};

struct ClosingOptions {
    int scan_samples = 1024;
    double tol = 1e-12;
    /// Number of consecutive branches k searched, starting at the first one
    /// whose target the scanned range reaches.
    int max_branches = 1;
    /// false: only k = 0 is admissible.
    bool allow_branch_shift = true;
};

struct SpaceForm {
    double G = 0.0;
    double mu = 0.0;
};

[[nodiscard]] inline cplx monodromy_angle(cplx rho, const Lattice& L)
{
    return L.eta1() * rho - L.zeta(rho) * L.omega1();
}

/// Multiplier of the affine chart gamma1/gamma2 over one period 2 omega1.
[[nodiscard]] inline cplx monodromy_ratio(cplx rho, const Lattice& L)
{
    return std::exp(-4.0 * monodromy_angle(rho, L));
}

/// G and mu of the space form in which the Sym point E produces an elastic
/// curve: (mu+G)/6 = wp(omega3) and E = (mu - G/2)/6. E = wp(omega3) is the
/// planar limit G = 0; branch points are rejected by make_family, not here.
[[nodiscard]] inline SpaceForm spaceform_from_sympoint(double E, const Lattice& L)
{
    const double e3 = L.e3();
    return {4.0 * (e3 - E), 2.0 * e3 + 4.0 * E};
}

namespace detail {

struct Reduced {
    int m, n, cover;
};

inline Reduced reduce_pair(int m, int n)
{
    if (n <= 0) throw std::invalid_argument("lobe count n must be positive");
    const int g = std::gcd(m, n);
    return {m / g, n / g, g};
}

template <typename F>
double bisect(F&& f, double a, double b, double fa, double tol)
{
    for (int it = 0; it < 200 && std::abs(b - a) > tol; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

/// All t in the scanned open interval with h(t) = target, found by sign
/// changes of h - target followed by bisection.
template <typename H>
std::vector<double> bracket_roots(H&& h, const std::vector<double>& ts, const std::vector<double>& hs, double target,
                                  double tol)
{
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < hs.size(); ++j) {
        const double a = hs[j] - target;
        const double b = hs[j + 1] - target;
        if (a == 0.0) {
            out.push_back(ts[j]);
            continue;
        }
        if ((a < 0.0) == (b < 0.0) || b == 0.0) continue;
        out.push_back(bisect([&](double t) { return h(t) - target; }, ts[j], ts[j + 1], a, tol));
    }
    if (!hs.empty() && hs.back() == target) out.push_back(ts.back());
    return out;
}

/// Solve along rho(t) = base + i t, t in (0, |omega3|), for
/// Im 2g(rho)/pi = m/n + k.
inline std::vector<ClosingSolution> solve_on_vertical(const Lattice& L, double base, int m, int n,
                                                      ClosingCase tag, const ClosingOptions& opt)
{
    const auto red = reduce_pair(m, n);
    const double top = std::abs(L.omega3());
    const int N = std::max(opt.scan_samples, 8);
    auto h = [&](double t) { return 2.0 * monodromy_angle(cplx(base, t), L).imag() / std::numbers::pi; };

    std::vector<double> ts(N), hs(N);
    double hmin = INFINITY, hmax = -INFINITY;
    for (int j = 0; j < N; ++j) {
        ts[j] = top * (j + 0.5) / N;
        hs[j] = h(ts[j]);
        hmin = std::min(hmin, hs[j]);
        hmax = std::max(hmax, hs[j]);
    }

    const double r = static_cast<double>(red.m) / red.n;
    const int k_first = opt.allow_branch_shift ? static_cast<int>(std::ceil(hmin - r)) : 0;
    const int k_last = opt.allow_branch_shift ? k_first + std::max(opt.max_branches, 1) - 1 : 0;

    std::vector<ClosingSolution> out;
    for (int k = k_first; k <= k_last; ++k) {
        const double target = r + k;
        if (target < hmin || target > hmax) continue;
        for (double t : bracket_roots(h, ts, hs, target, opt.tol * top)) {
            ClosingSolution s;
            s.m = red.m;
            s.n = red.n;
            s.cover = red.cover;
            s.branch = k;
            s.rho = cplx(base, t);
            s.caseTag = tag;
            const cplx wp_rho = L.wp(s.rho);
            s.E = wp_rho.real();
            const auto sf = spaceform_from_sympoint(s.E, L);
            s.G = sf.G;
            s.mu = sf.mu;
            s.residual = std::abs(2.0 * monodromy_angle(s.rho, L) - cplx(0.0, std::numbers::pi * target));
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace detail

/// Every bracketed solution with rho on the open segment (0, omega3).
[[nodiscard]] inline std::vector<ClosingSolution> solve_closing_sphere_all(const Lattice& L, int m, int n,
                                                                           const ClosingOptions& opt = {})
{
    return detail::solve_on_vertical(L, 0.0, m, n, ClosingCase::Sphere, opt);
}

[[nodiscard]] inline ClosingSolution solve_closing_sphere(const Lattice& L, int m, int n,
                                                          const ClosingOptions& opt = {})
{
    auto all = solve_closing_sphere_all(L, m, n, opt);
    if (all.empty()) throw Error(ErrorKind::TargetOutOfRange, "no sign change brackets the closing target");
    return all.front();
}

[[nodiscard]] inline std::vector<ClosingSolution> solve_closing_hyperbolic_orbitlike_all(
    const Lattice& L, int m, int n, const ClosingOptions& opt = {})
{
    if (!L.orbitlike()) throw Error(ErrorKind::WrongDiscriminant, "hyperbolic orbitlike closing needs D > 0");
    return detail::solve_on_vertical(L, L.omega1(), m, n, ClosingCase::HyperbolicOrbitlike, opt);
}

[[nodiscard]] inline ClosingSolution solve_closing_hyperbolic_orbitlike(const Lattice& L, int m, int n,
                                                                        const ClosingOptions& opt = {})
{
    auto all = solve_closing_hyperbolic_orbitlike_all(L, m, n, opt);
    if (all.empty()) throw Error(ErrorKind::TargetOutOfRange, "no sign change brackets the closing target");
    return all.front();
}

/// -wp(omega1) > eta1/omega1: g has a zero on (0, omega1) besides omega1.
[[nodiscard]] inline bool wavelike_closing_criterion(const Lattice& L)
{
    return -L.wp(L.omega1()).real() > L.eta1() / L.omega1();
}

/// The closed curve with real rho (translational monodromy), if any. Its
/// closing angle is zero and it closes after one period.
[[nodiscard]] inline std::optional<ClosingSolution> solve_closing_hyperbolic_wavelike(const Lattice& L,
                                                                                     const ClosingOptions& opt = {})
{
    if (!L.wavelike()) throw Error(ErrorKind::WrongDiscriminant, "hyperbolic wavelike closing needs D < 0");
    if (!wavelike_closing_criterion(L)) return std::nullopt;

    const double w1 = L.omega1();
    const int N = std::max(opt.scan_samples, 8);
    auto h = [&](double t) { return monodromy_angle(cplx(t, 0.0), L).real(); };
    std::vector<double> ts(N), hs(N);
    for (int j = 0; j < N; ++j) {
        ts[j] = w1 * (j + 0.5) / N;
        hs[j] = h(ts[j]);
    }
    const auto roots = detail::bracket_roots(h, ts, hs, 0.0, opt.tol * w1);
    if (roots.empty()) return std::nullopt;

    ClosingSolution s;
    s.m = 0;
    s.n = 1;
    s.rho = cplx(roots.front(), 0.0);
    s.caseTag = ClosingCase::HyperbolicWavelike;
    s.E = L.wp(s.rho).real();
    const auto sf = spaceform_from_sympoint(s.E, L);
    s.G = sf.G;
    s.mu = sf.mu;
    s.residual = std::abs(2.0 * monodromy_angle(s.rho, L));
    return s;
}

/// Chordal distance in CP^1 between [gamma(0)] and [gamma(2 n omega1)],
/// |det(a, b)| / (|a| |b|), evaluated from the logarithms of the lift.
[[nodiscard]] inline double projective_closure_error(const CurveFamily& fam, int n)
{
    auto unit = [&](double x) {
        const auto [l1, l2] = log_curve_hat(x, fam);
        const double top = std::max(l1.real(), l2.real());
        const cplx a = std::exp(l1 - top);
        const cplx b = std::exp(l2 - top);
        const double nrm = std::sqrt(std::norm(a) + std::norm(b));
        return std::pair<cplx, cplx>{a / nrm, b / nrm};
    };
    const auto [a1, a2] = unit(0.0);
    const auto [b1, b2] = unit(2.0 * n * fam.L.omega1());
    return std::abs(a1 * b2 - a2 * b1);
}

/// Solve wp(i t) = value for t in (0, |omega3|); wp increases from -inf to
/// wp(omega3) along that segment.
[[nodiscard]] inline cplx solve_wp_on_imaginary_segment(const Lattice& L, double value)
{
    const double top = std::abs(L.omega3());
    if (!(value < L.e3())) throw Error(ErrorKind::NoSolutionOnSegment, "wp does not attain the value on (0, omega3)");
    double lo = 2.0 * L.pole_cutoff();
    double hi = top;
    if (L.wp(I * lo).real() > value) throw Error(ErrorKind::NoSolutionOnSegment, "value lies below the pole cutoff");
    for (int it = 0; it < 200 && hi - lo > 1e-16 * top; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (L.wp(I * mid).real() < value) lo = mid;
        else hi = mid;
    }
    return I * (0.5 * (lo + hi));
}

/// The lambda = 0 elastic member of the family that belongs to a closing
/// solution: kappa(0) is the root of P4 of largest modulus.
[[nodiscard]] inline ElasticParams elastic_params(const ClosingSolution& sol, const Lattice& L)
{
    return elastic_representative(L, sol.G);
}

[[nodiscard]] inline CurveFamily elastic_family(const ClosingSolution& sol, const Lattice& L)
{
    const auto p = elastic_params(sol, L);
    const auto roots = quartic_real_roots(p);
    if (roots.empty()) throw Error(ErrorKind::NoSolutionOnSegment, "P4 has no real root");
    const double k0 = std::max(std::abs(roots.front()), std::abs(roots.back()));
    return make_family(L, x0_from_kappa0(p, L, k0), sol.rho);
}

/// Isospectral deformation of the elastic member: same (g2, g3, rho), x0
/// moved along the imaginary segment. Member 0 is the elastic curve itself.
[[nodiscard]] inline std::vector<CurveFamily> isospectral_sweep(const ClosingSolution& sol, const Lattice& L, int steps)
{
    std::vector<CurveFamily> out;
    out.push_back(elastic_family(sol, L));
    const double top = std::abs(L.omega3());
    for (int j = 1; j < steps; ++j) {
        const cplx x0 = I * (top * j / steps);
        if (on_forbidden_set(L, x0)) continue;
        out.push_back(make_family(L, x0, sol.rho));
    }
    return out;
}

/// Willmore Hopf tori come from elastic curves with mu = -G/2, lambda = 0.
/// With G = 1 this fixes wp(omega3) = 1/12 and leaves nu free:
/// g2 = 1/48 + nu/4, g3 = 1/1728 - nu/48, wavelike for nu < 0.
struct WillmoreHopfCurve {
    double nu = 0.0;
    Lattice L;
    ClosingSolution sol;
};

[[nodiscard]] inline Lattice willmore_hopf_lattice(double nu)
{
    return Lattice::from_invariants(1.0 / 48.0 + nu / 4.0, 1.0 / 1728.0 - nu / 48.0);
}

namespace detail {

inline double willmore_hopf_angle(double nu)
{
    const auto L = willmore_hopf_lattice(nu);
    const cplx rho = solve_wp_on_imaginary_segment(L, -1.0 / 6.0);
    return 2.0 * monodromy_angle(rho, L).imag() / std::numbers::pi;
}

}  // namespace detail

/// Search nu < 0 for the wavelike elastic curve on the unit sphere with
/// mu = -1/2 that closes with lobe count n and winding m (mod n).
[[nodiscard]] inline WillmoreHopfCurve solve_willmore_hopf(int m, int n, const ClosingOptions& opt = {})
{
    const auto red = detail::reduce_pair(m, n);
    const int N = std::max(opt.scan_samples / 4, 16);
    // log-spaced nu in [-1e4, -1e-4]
    std::vector<double> ls(N), hs(N);
    for (int j = 0; j < N; ++j) {
        ls[j] = -4.0 + 8.0 * j / (N - 1);
        hs[j] = detail::willmore_hopf_angle(-std::pow(10.0, ls[j]));
    }
    const double r = static_cast<double>(red.m) / red.n;
    const double hmin = *std::min_element(hs.begin(), hs.end());
    const double hmax = *std::max_element(hs.begin(), hs.end());
    for (int k = static_cast<int>(std::ceil(hmin - r)); r + k <= hmax; ++k) {
        const double target = r + k;
        const auto roots = detail::bracket_roots([](double l) { return detail::willmore_hopf_angle(-std::pow(10.0, l)); },
                                                 ls, hs, target, 1e-15);
        if (roots.empty()) continue;
        WillmoreHopfCurve w{-std::pow(10.0, roots.front()), willmore_hopf_lattice(-std::pow(10.0, roots.front())), {}};
        ClosingSolution s;
        s.m = red.m;
        s.n = red.n;
        s.cover = red.cover;
        s.branch = k;
        s.rho = solve_wp_on_imaginary_segment(w.L, -1.0 / 6.0);
        s.caseTag = ClosingCase::Sphere;
        s.E = w.L.wp(s.rho).real();
        const auto sf = spaceform_from_sympoint(s.E, w.L);
        s.G = sf.G;
        s.mu = sf.mu;
        s.residual = std::abs(2.0 * monodromy_angle(s.rho, w.L) - cplx(0.0, std::numbers::pi * target));
        w.sol = s;
        return w;
    }
    throw Error(ErrorKind::TargetOutOfRange, "closing target not reached by Willmore Hopf data");
}

}  // namespace willmore
