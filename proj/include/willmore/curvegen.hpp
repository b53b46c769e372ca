#pragma once

// The explicit curve family
//
//   gamma1(x) = sigma(u - rho) / sigma(u) * exp( zeta(rho) u),
//   gamma2(x) = sigma(u + rho) / sigma(u) * exp(-zeta(rho) u),   u = x + x0,
//
// in C^2, with wp(rho) = E. Both components solve the Lame equation
// y'' = (2 wp(u) + E) y, so the curve [gamma1 : gamma2] in CP^1 has
// Schwarzian derivative q = -2 wp(u) - E.

#include <cmath>
#include <utility>

#include "willmore/elastica.hpp"
#include "willmore/errors.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore {

struct CurveFamily {
    Lattice L;
    cplx x0;
    cplx rho;
    double E = 0.0;
};

/// Is wp(x + z) real for every real x? This happens exactly when Im z is a
/// multiple of |omega3|. For rectangular lattices that is the set
/// (1/2)Gamma + R; for rhombic ones (D < 0) the lines through the off-axis
/// half-periods are not lines of reality and stay admissible.
[[nodiscard]] inline bool on_forbidden_set(const Lattice& L, cplx z, double tol = 1e-10)
{
    const double step = std::abs(L.omega3());
    return std::abs(std::remainder(z.imag(), step)) <= tol * step;
}

[[nodiscard]] inline CurveFamily make_family(const Lattice& L, cplx x0, cplx rho)
{
    if (on_forbidden_set(L, x0)) throw Error(ErrorKind::InvalidX0, "wp(x + x0) is real along the whole line");
    const cplx wp_rho = L.wp(rho);
    const double scale = 1.0 + std::abs(wp_rho);
    if (std::abs(wp_rho.imag()) > 1e-8 * scale)
        throw Error(ErrorKind::BranchPoint, "wp(rho) is not real, no real Sym point");
    const double E = wp_rho.real();
    if (std::abs(L.wp_prime(rho)) <= 1e-10 * std::pow(scale, 1.5))
        throw Error(ErrorKind::BranchPoint, "E is a branch point of wp");
    return {L, x0, rho, E};
}

/// log of both lift components; exp() gives curve_hat. Working with logs keeps
/// the sigma quotients finite over many periods.
[[nodiscard]] inline std::pair<cplx, cplx> log_curve_hat(double x, const CurveFamily& f)
{
    const cplx u = x + f.x0;
    const cplx ls = f.L.log_sigma(u);
    const cplx zr = f.L.zeta(f.rho);
    return {f.L.log_sigma(u - f.rho) - ls + zr * u, f.L.log_sigma(u + f.rho) - ls - zr * u};
}

[[nodiscard]] inline std::pair<cplx, cplx> curve_hat(double x, const CurveFamily& f)
{
    const auto [l1, l2] = log_curve_hat(x, f);
    return {std::exp(l1), std::exp(l2)};
}

/// Logarithmic derivatives (gamma_i)'/gamma_i.
[[nodiscard]] inline std::pair<cplx, cplx> curve_hat_log_derivative(double x, const CurveFamily& f)
{
    const cplx u = x + f.x0;
    const cplx zu = f.L.zeta(u);
    const cplx zr = f.L.zeta(f.rho);
    return {f.L.zeta(u - f.rho) - zu + zr, f.L.zeta(u + f.rho) - zu - zr};
}

/// det(gamma, gamma'); constant in x and equal to sigma(rho)^2 wp'(rho).
[[nodiscard]] inline cplx wronskian(double x, const CurveFamily& f)
{
    const auto [g1, g2] = curve_hat(x, f);
    const auto [d1, d2] = curve_hat_log_derivative(x, f);
    return g1 * g2 * (d2 - d1);
}

[[nodiscard]] inline cplx wronskian_closed_form(const CurveFamily& f)
{
    const cplx s = f.L.sigma(f.rho);
    return s * s * f.L.wp_prime(f.rho);
}

/// Affine chart gamma1/gamma2 of the projective curve.
[[nodiscard]] inline cplx affine_point(double x, const CurveFamily& f)
{
    const auto [l1, l2] = log_curve_hat(x, f);
    return std::exp(l1 - l2);
}

/// d/dx of the affine chart.
[[nodiscard]] inline cplx affine_velocity(double x, const CurveFamily& f)
{
    const auto [d1, d2] = curve_hat_log_derivative(x, f);
    return affine_point(x, f) * (d1 - d2);
}

[[nodiscard]] inline cplx affine_acceleration(double x, const CurveFamily& f)
{
    const auto [d1, d2] = curve_hat_log_derivative(x, f);
    const cplx u = x + f.x0;
    const cplx dd = f.L.wp(u + f.rho) - f.L.wp(u - f.rho);
    const cplx D = d1 - d2;
    return affine_point(x, f) * (D * D + dd);
}

[[nodiscard]] inline cplx schwarzian(double x, const CurveFamily& f)
{
    return -2.0 * f.L.wp(x + f.x0) - f.E;
}

[[nodiscard]] constexpr cplx miura(double kappa, double kappa_prime, double G) noexcept
{
    return cplx(kappa * kappa / 4.0 + G / 4.0, kappa_prime / 2.0);
}

/// kappa(0) for x0 on the imaginary axis: the curvature is the quotient
/// Re wp'(u) / Im wp(u), whose limit at u = x0 is wp''(x0) / Im wp'(x0).
[[nodiscard]] inline double kappa_at_origin(const CurveFamily& f)
{
    const cplx w = f.L.wp(f.x0);
    const cplx wpp = 6.0 * w * w - f.L.g2() / 2.0;
    const double denom = f.L.wp_prime(f.x0).imag();
    if (denom == 0.0) throw Error(ErrorKind::InvalidX0, "wp'(x0) has no imaginary part");
    return wpp.real() / denom;
}

/// The real constant b with wp(x + x0) = -i kappa'/4 - kappa^2/8 - b;
/// equals (mu+G)/12 for the elastic parameters of the family.
[[nodiscard]] inline double kdv_shift(const CurveFamily& f)
{
    const double k0 = kappa_at_origin(f);
    return -f.L.wp(f.x0).real() - k0 * k0 / 8.0;
}

/// Geodesic curvature kappa(x) = 4 Im zeta(x + x0) + const, the constant fixed
/// by kappa(0). The parameters only serve as a consistency check: kappa(0) must
/// be a root of P4.
[[nodiscard]] inline double kappa(double x, const CurveFamily& f, const ElasticParams& p)
{
    if (std::abs(f.x0.real()) > 1e-12 * std::abs(f.x0) || on_forbidden_set(f.L, f.x0))
        throw Error(ErrorKind::InvalidX0, "x0 must lie on the open imaginary segment");
    const double k0 = kappa_at_origin(f);
    const double scale = 1.0 + std::abs(p.nu) + std::abs(p.mu_plus_G()) * k0 * k0 + 0.25 * std::pow(k0, 4) +
                         2.0 * std::abs(p.lambda * k0);
    if (std::abs(p.p4(k0)) > 1e-7 * scale)
        throw Error(ErrorKind::InvalidX0, "kappa(0) induced by x0 is not a root of P4 for these parameters");
    const double c = k0 - 4.0 * f.L.zeta(f.x0).imag();
    return 4.0 * f.L.zeta(x + f.x0).imag() + c;
}

[[nodiscard]] inline double kappa_prime(double x, const CurveFamily& f)
{
    return -4.0 * f.L.wp(x + f.x0).imag();
}

[[nodiscard]] inline double kappa_second(double x, const CurveFamily& f)
{
    return -4.0 * f.L.wp_prime(x + f.x0).imag();
}

/// Stationary KdV residual (q')^2 + 2q^3 + c q^2 + 2d q + e.
[[nodiscard]] inline cplx kdv_residual(cplx q, cplx dq, const KdVCoeffs& k) noexcept
{
    return dq * dq + 2.0 * q * q * q + k.c * q * q + 2.0 * k.d * q + k.e;
}

/// Elastic parameters realised by the family: (mu+G) = 12b; lambda from the
/// Euler-Lagrange equation at x = 0; nu from g2; E = (mu - G/2)/6 fixes G.
[[nodiscard]] inline ElasticParams params_of_family(const CurveFamily& f)
{
    const double b = kdv_shift(f);
    const double s = 12.0 * b;
    const double k0 = kappa_at_origin(f);
    const double kpp0 = -4.0 * f.L.wp_prime(f.x0).imag();
    ElasticParams p;
    p.G = 8.0 * b - 4.0 * f.E;
    p.mu = s - p.G;
    p.lambda = -kpp0 - 0.5 * k0 * k0 * k0 - s * k0;
    p.nu = 4.0 * (f.L.g2() - s * s / 12.0);
    return p;
}

}  // namespace willmore
