#pragma once

// Parameter algebra of constrained elastic curves in a space form of
// curvature G:
//
//   kappa'' + kappa^3 / 2 + (mu + G) kappa + lambda = 0,
//   (kappa')^2 = -P4(kappa),  P4(x) = x^4/4 + (mu+G) x^2 + 2 lambda x + nu.
//
// The Miura map kappa -> q = i kappa'/2 + kappa^2/4 + G/4 turns this into the
// stationary KdV equation (q')^2 + 2q^3 + c q^2 + 2d q + e = 0, whose
// solutions are q = -2 wp(x + x0) - c/6 for the invariants computed below.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "willmore/errors.hpp"
#include "willmore/polynomial.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore {

struct ElasticParams {
    double mu = 0.0;      // length constraint
    double lambda = 0.0;  // enclosed-area constraint
    double nu = 0.0;      // integration constant of the first integral
    double G = 0.0;       // curvature of the space form

    [[nodiscard]] double mu_plus_G() const noexcept { return mu + G; }

    [[nodiscard]] std::array<double, 5> p4_coefficients() const noexcept
    {
        return {nu, 2.0 * lambda, mu + G, 0.0, 0.25};
    }

    template <typename T>
    [[nodiscard]] T p4(T x) const
    {
        return poly::evaluate<T>(p4_coefficients(), x);
    }

    template <typename T>
    [[nodiscard]] T p4_prime(T x) const
    {
        return poly::evaluate_derivative<T>(p4_coefficients(), x);
    }
};

struct KdVCoeffs {
    double c = 0.0;
    double d = 0.0;
    double e = 0.0;
};

[[nodiscard]] inline KdVCoeffs kdv_from_params(const ElasticParams& p) noexcept
{
    KdVCoeffs k;
    k.c = p.mu - p.G / 2.0;
    k.d = -p.nu / 4.0 - p.G * p.G / 16.0 - p.mu * p.G / 4.0;
    k.e = k.c * k.d + p.lambda * p.lambda / 4.0 + p.mu * p.mu * p.G / 4.0 - p.nu * p.G / 4.0;
    return k;
}

/// g2, g3 from the KdV coefficients: g2 = c^2/12 - d, g3 = -cd/12 + e/4 + c^3/216.
[[nodiscard]] inline LatticeInvariants invariants_from_kdv(const KdVCoeffs& k) noexcept
{
    return LatticeInvariants::make(k.c * k.c / 12.0 - k.d, -k.c * k.d / 12.0 + k.e / 4.0 + k.c * k.c * k.c / 216.0);
}

[[nodiscard]] inline LatticeInvariants invariants_from_params(const ElasticParams& p) noexcept
{
    const double s = p.mu_plus_G();
    const double g2 = s * s / 12.0 + p.nu / 4.0;
    const double g3 = s * s * s / 216.0 + p.lambda * p.lambda / 16.0 - p.nu * s / 24.0;
    return LatticeInvariants::make(g2, g3);
}

/// Non-leading coefficients (s^2, s^1, s^0) of the cubic resolvent
/// s^3 + 8(mu+G)s^2 + 16((mu+G)^2 - nu)s - 64 lambda^2.
[[nodiscard]] inline std::array<double, 3> cubic_resolvent(const ElasticParams& p) noexcept
{
    const double s = p.mu_plus_G();
    return {8.0 * s, 16.0 * (s * s - p.nu), -64.0 * p.lambda * p.lambda};
}

/// The substitution 16x = s + (8/3)(mu+G) that carries resolvent roots to
/// roots of P3.
[[nodiscard]] inline double resolvent_to_p3_root(const ElasticParams& p, double s) noexcept
{
    return (s + 8.0 / 3.0 * p.mu_plus_G()) / 16.0;
}

[[nodiscard]] inline std::vector<double> quartic_real_roots(const ElasticParams& p)
{
    return poly::real_roots(p.p4_coefficients());
}

struct ExistenceReport {
    bool exists = false;
    /// (mu+G)/6 <= every real root of P3.
    bool criterion = false;
    /// (mu+G)/6 coincides with the smallest real root of P3 (the lambda = 0 case).
    bool boundary = false;
    std::string reason;
};

[[nodiscard]] inline ExistenceReport real_solution_exists(const ElasticParams& p)
{
    ExistenceReport r;
    const auto roots = quartic_real_roots(p);
    r.exists = !roots.empty();

    const auto inv = invariants_from_params(p);
    const auto p3roots = poly::real_roots(inv.p3_coefficients());
    const double sixth = p.mu_plus_G() / 6.0;
    const double scale = 1.0 + std::abs(sixth);
    r.criterion = std::all_of(p3roots.begin(), p3roots.end(), [&](double e) { return sixth <= e + 1e-9 * scale; });
    r.boundary = !p3roots.empty() && std::abs(p3roots.front() - sixth) <= 1e-9 * scale;

    if (r.exists) {
        r.reason = "P4 has " + std::to_string(roots.size()) + " real root(s)";
    } else if (inv.disc > 0.0) {
        r.reason = "no orbitlike solution: P4 has no real root";
    } else {
        r.reason = "P4 has no real root";
    }
    return r;
}

enum class SolutionTag { Wavelike, Orbitlike, ConstantCurvature, Asymptotic };

constexpr const char* to_string(SolutionTag t) noexcept
{
    switch (t) {
        case SolutionTag::Wavelike: return "wavelike";
        case SolutionTag::Orbitlike: return "orbitlike";
        case SolutionTag::ConstantCurvature: return "constant-curvature";
        case SolutionTag::Asymptotic: return "asymptotic";
    }
    return "unknown";
}

struct SolutionClass {
    SolutionTag tag = SolutionTag::Wavelike;
    double kappa0 = 0.0;
    bool periodic = true;
};

/// Classify the solution of the initial value problem kappa(0) = kappa0,
/// kappa'(0) = 0. Multiple roots of P4 (D = 0) are detected by root clustering,
/// which keeps the degenerate branch consistent with the quartic solver.
[[nodiscard]] inline SolutionClass classify(const ElasticParams& p, double kappa0)
{
    const double scale = 1.0 + std::abs(p.nu) + 2.0 * std::abs(p.lambda * kappa0) +
                         std::abs(p.mu_plus_G()) * kappa0 * kappa0 + 0.25 * std::pow(kappa0, 4);
    if (std::abs(p.p4(kappa0)) > 1e-9 * scale)
        throw Error(ErrorKind::InvalidInitialValue, "kappa0 is not a root of P4");

    SolutionClass out;
    out.kappa0 = kappa0;
    const auto roots = poly::roots(p.p4_coefficients());
    const bool degenerate = std::any_of(roots.begin(), roots.end(), [](const poly::Root& r) { return r.multiplicity > 1; });
    if (degenerate) {
        const bool multiple_at_kappa0 = std::any_of(roots.begin(), roots.end(), [&](const poly::Root& r) {
            return r.multiplicity > 1 && std::abs(r.value - cplx(kappa0, 0.0)) <= 1e-6 * (1.0 + std::abs(kappa0));
        });
        if (multiple_at_kappa0) {
            out.tag = SolutionTag::ConstantCurvature;
        } else {
            // kappa runs off towards the multiple root and never returns
            out.tag = SolutionTag::Asymptotic;
            out.periodic = false;
        }
        return out;
    }
    out.tag = invariants_from_params(p).disc < 0.0 ? SolutionTag::Wavelike : SolutionTag::Orbitlike;
    return out;
}

/// The lambda = 0 member of the isospectral class of the given lattice:
/// (mu+G)/6 = wp(omega3), nu = 4 g2 - 12 wp(omega3)^2. Only mu+G is fixed, so
/// the caller chooses the ambient curvature G.
[[nodiscard]] inline ElasticParams elastic_representative(const Lattice& L, double G = 0.0)
{
    const double e3 = L.e3();
    ElasticParams p;
    p.lambda = 0.0;
    p.mu = 6.0 * e3 - G;
    p.G = G;
    p.nu = 4.0 * L.g2() - 12.0 * e3 * e3;
    return p;
}

[[nodiscard]] inline ElasticParams elastic_representative(const LatticeInvariants& inv, double G = 0.0)
{
    return elastic_representative(Lattice::from_invariants(inv.g2, inv.g3), G);
}

/// Value wp(x0) must take so that kappa(0) = kappa0 is a critical point of the
/// curvature: wp(x0) = -kappa0^2/8 - (mu+G)/12.
[[nodiscard]] inline double x0_target(const ElasticParams& p, double kappa0) noexcept
{
    return -kappa0 * kappa0 / 8.0 - p.mu_plus_G() / 12.0;
}

/// Solve wp(x0) = x0_target(p, kappa0) for x0 = i y, 0 < y < |omega3|. On that
/// segment wp is real and increases monotonically from -inf to wp(omega3), so
/// bisection is exact up to rounding. The returned x0 has positive imaginary
/// part; -x0 describes the same curve with kappa -> -kappa.
[[nodiscard]] inline cplx x0_from_kappa0(const ElasticParams& p, const Lattice& L, double kappa0)
{
    const double target = x0_target(p, kappa0);
    const double top = L.omega3().imag();
    if (!(target < L.e3()))
        throw Error(ErrorKind::NoSolutionOnSegment, "wp does not attain the target on (0, omega3)");
    double lo = L.pole_cutoff() * 2.0;
    double hi = top;
    if (L.wp(I * lo).real() > target)
        throw Error(ErrorKind::NoSolutionOnSegment, "target lies below the pole cutoff");
    for (int it = 0; it < 200 && hi - lo > 1e-16 * top; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (L.wp(I * mid).real() < target) lo = mid;
        else hi = mid;
    }
    return I * (0.5 * (lo + hi));
}

}  // namespace willmore
