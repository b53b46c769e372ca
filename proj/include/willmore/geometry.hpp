#pragma once

// Space-form models, Hopf lifts, torus meshes and the integral invariants of
// the resulting tori.
//
// Models and their metrics (curvature G):
//   RoundSphere      4|dz|^2 / (G (1+|z|^2)^2)          stereographic chart
//   PoincareDisc     4|dz|^2 / (|G| (1-|z|^2)^2)
//   UpperHalfPlane   |dz|^2 / (|G| (Im z)^2)
//   Plane            |dz|^2                              G = 0

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "willmore/closing.hpp"
#include "willmore/curvegen.hpp"
#include "willmore/elastica.hpp"
#include "willmore/errors.hpp"
#include "willmore/weierstrass.hpp"

namespace willmore {

enum class Model { RoundSphere, PoincareDisc, UpperHalfPlane, Plane };

constexpr const char* to_string(Model m) noexcept
{
    switch (m) {
        case Model::RoundSphere: return "sphere";
        case Model::PoincareDisc: return "poincare-disc";
        case Model::UpperHalfPlane: return "upper-half-plane";
        case Model::Plane: return "plane";
    }
    return "unknown";
}

/// Conformal factor e^phi of the model metric ds = e^phi |dz|.
[[nodiscard]] inline double metric_factor(Model model, double G, cplx z) noexcept
{
    switch (model) {
        case Model::RoundSphere: return 2.0 / (std::sqrt(G) * (1.0 + std::norm(z)));
        case Model::PoincareDisc: return 2.0 / (std::sqrt(-G) * (1.0 - std::norm(z)));
        case Model::UpperHalfPlane: return 1.0 / (std::sqrt(-G) * z.imag());
        case Model::Plane: return 1.0;
    }
    return 1.0;
}

/// Gradient of phi = log(metric_factor), as a complex number.
[[nodiscard]] inline cplx metric_log_gradient(Model model, cplx z) noexcept
{
    switch (model) {
        case Model::RoundSphere: return -2.0 * z / (1.0 + std::norm(z));
        case Model::PoincareDisc: return 2.0 * z / (1.0 - std::norm(z));
        case Model::UpperHalfPlane: return cplx(0.0, -1.0 / z.imag());
        case Model::Plane: return 0.0;
    }
    return 0.0;
}

[[nodiscard]] inline double model_speed(Model model, double G, cplx z, cplx v) noexcept
{
    return metric_factor(model, G, z) * std::abs(v);
}

/// Geodesic curvature of a chart curve with velocity v and acceleration a,
/// measured towards the left normal i v.
[[nodiscard]] inline double model_geodesic_curvature(Model model, double G, cplx z, cplx v, cplx a) noexcept
{
    const double sp = std::abs(v);
    const double k_euc = (std::conj(v) * a).imag() / (sp * sp * sp);
    const cplx nrm = I * v / sp;
    const cplx grad = metric_log_gradient(model, z);
    const double dphi_n = grad.real() * nrm.real() + grad.imag() * nrm.imag();
    return (k_euc - dphi_n) / metric_factor(model, G, z);
}

struct CurveSample {
    double x = 0.0;
    cplx point{};
    double kappa = 0.0;
};

struct SpaceFormCurve {
    Model model = Model::RoundSphere;
    double G = 0.0;
    /// Chart point = factor * (gamma1/gamma2), or factor * (gamma2/gamma1)
    /// when inverted; the factor is real for rotational monodromy and
    /// unimodular for the upper half plane.
    cplx factor{1.0, 0.0};
    bool inverted = false;
    double scale_r = 1.0;
    double length = 0.0;  // closing length 2 n omega1
    std::function<cplx(double)> point;
    std::function<cplx(double)> velocity;
    std::function<cplx(double)> acceleration;
    std::function<double(double)> kappa;
    std::vector<CurveSample> samples;  // uniform over [0, length], both ends included
};

inline void resample(SpaceFormCurve& c, int count)
{
    c.samples.clear();
    c.samples.reserve(static_cast<std::size_t>(count) + 1);
    for (int j = 0; j <= count; ++j) {
        const double x = c.length * j / count;
        c.samples.push_back({x, c.point(x), c.kappa(x)});
    }
}

[[nodiscard]] inline double max_speed_error(const SpaceFormCurve& c, int count)
{
    double err = 0.0;
    for (int j = 0; j <= count; ++j) {
        const double x = c.length * j / count;
        err = std::max(err, std::abs(model_speed(c.model, c.G, c.point(x), c.velocity(x)) - 1.0));
    }
    return err;
}

/// Model for a curve in curvature G: hyperbolic curves with rotational
/// monodromy (fixed points 0 and inf of the chart) go to the disc, real rho
/// (translational monodromy) to the half plane.
[[nodiscard]] inline Model model_for(double G, cplx rho) noexcept
{
    if (std::abs(G) < 1e-14) return Model::Plane;
    if (G > 0.0) return Model::RoundSphere;
    return std::abs(rho.imag()) <= 1e-14 * std::abs(rho) ? Model::UpperHalfPlane : Model::PoincareDisc;
}

/// Scale the affine chart so the curve is arclength parametrized in the model
/// of its space form. Among the candidate factors allowed by the speed at
/// x = 0, the one that is unit speed at a second point is kept. G is the one
/// realised by the family; along an isospectral sweep it moves away from the
/// value of the elastic member.
[[nodiscard]] inline SpaceFormCurve normalize_to_spaceform(const CurveFamily& fam, const ClosingSolution& sol,
                                                         int samples_per_period = 256)
{
    const ElasticParams p = params_of_family(fam);
    SpaceFormCurve c;
    c.G = p.G;
    c.model = model_for(p.G, fam.rho);
    c.length = 2.0 * sol.n * fam.L.omega1();

    // chart candidates: gamma1/gamma2 or its inverse (rho -> -rho), times a factor
    auto base_point = [&fam](double x, bool inv) {
        const cplx z = affine_point(x, fam);
        return inv ? 1.0 / z : z;
    };
    auto base_velocity = [&fam](double x, bool inv) {
        const cplx z = affine_point(x, fam);
        const cplx v = affine_velocity(x, fam);
        return inv ? -v / (z * z) : v;
    };

    const cplx z0 = affine_point(0.0, fam);
    if (!std::isfinite(std::abs(z0)) || std::abs(z0) > 1e12 || std::abs(z0) < 1e-12)
        throw Error(ErrorKind::ChartSingularity, "affine chart degenerates at x = 0");
    const double sG = std::sqrt(std::abs(c.G));

    struct Candidate {
        cplx f;
        bool inv;
    };
    std::vector<Candidate> candidates;
    for (bool inv : {false, true}) {
        const cplx w0 = base_point(0.0, inv);
        const double a = std::abs(base_velocity(0.0, inv));
        const double g = std::abs(w0);
        switch (c.model) {
            case Model::RoundSphere: {
                // sG g^2 r^2 - 2 a r + sG = 0
                const double d = a * a - c.G * g * g;
                if (d < 0.0) break;
                candidates.push_back({sG / (a + std::sqrt(d)), inv});
                candidates.push_back({(a + std::sqrt(d)) / (sG * g * g), inv});
                break;
            }
            case Model::PoincareDisc:
                // sG g^2 r^2 + 2 a r - sG = 0
                candidates.push_back({sG / (a + std::sqrt(a * a + sG * sG * g * g)), inv});
                break;
            case Model::UpperHalfPlane: {
                // Im(e^{-i th} w0) = a / sG
                const double s = a / (sG * g);
                if (s > 1.0) break;
                const double ph = std::arg(w0);
                for (double th : {ph - std::asin(s), ph - (std::numbers::pi - std::asin(s))})
                    candidates.push_back({std::exp(cplx(0.0, -th)), inv});
                break;
            }
            case Model::Plane: candidates.push_back({1.0 / a, inv}); break;
        }
    }

    // keep the candidate that stays in the model and is unit speed elsewhere
    const int probes = 16;
    double best = INFINITY;
    Candidate chosen{1.0, false};
    for (const auto& cand : candidates) {
        double err = 0.0;
        for (int j = 1; j <= probes; ++j) {
            const double x = c.length * (j - 0.37) / probes;
            const cplx z = cand.f * base_point(x, cand.inv);
            if (c.model == Model::UpperHalfPlane && z.imag() <= 0.0) err = INFINITY;
            if (c.model == Model::PoincareDisc && std::norm(z) >= 1.0) err = INFINITY;
            if (!std::isfinite(err)) break;
            err = std::max(err, std::abs(model_speed(c.model, c.G, z, cand.f * base_velocity(x, cand.inv)) - 1.0));
        }
        if (err < best) {
            best = err;
            chosen = cand;
        }
    }
    if (!(best < 1e-6)) throw Error(ErrorKind::ChartSingularity, "no chart normalization gives a unit speed curve");
    c.factor = chosen.f;
    c.inverted = chosen.inv;
    c.scale_r = std::abs(c.factor);

    const cplx f = c.factor;
    const CurveFamily F = fam;
    if (!chosen.inv) {
        c.point = [F, f](double x) { return f * affine_point(x, F); };
        c.velocity = [F, f](double x) { return f * affine_velocity(x, F); };
        c.acceleration = [F, f](double x) { return f * affine_acceleration(x, F); };
    } else {
        c.point = [F, f](double x) { return f / affine_point(x, F); };
        c.velocity = [F, f](double x) {
            const cplx z = affine_point(x, F);
            return -f * affine_velocity(x, F) / (z * z);
        };
        c.acceleration = [F, f](double x) {
            const cplx z = affine_point(x, F);
            const cplx v = affine_velocity(x, F);
            return f * (2.0 * v * v / (z * z * z) - affine_acceleration(x, F) / (z * z));
        };
    }
    c.kappa = [F, p](double x) { return kappa(x, F, p); };

    resample(c, samples_per_period * sol.n);
    for (const auto& s : c.samples) {
        if (!std::isfinite(std::abs(s.point)) || std::abs(s.point) > 1e12)
            throw Error(ErrorKind::ChartSingularity, "gamma2 vanishes on the curve");
    }
    return c;
}

/// Circle of constant geodesic curvature kappa, arclength parametrized,
/// centred at the chart origin (disc model for G < 0).
[[nodiscard]] inline SpaceFormCurve circle_curve(double G, double kappa_value, int samples = 256)
{
    SpaceFormCurve c;
    c.G = G;
    double radius = 0.0;  // Euclidean chart radius
    if (G > 0.0) {
        const double sG = std::sqrt(G);
        const double R = std::atan2(sG, kappa_value) / sG;  // kappa = sG cot(sG R)
        c.model = Model::RoundSphere;
        c.length = 2.0 * std::numbers::pi * std::sin(sG * R) / sG;
        radius = std::tan(sG * R / 2.0);
    } else if (G < 0.0) {
        const double sG = std::sqrt(-G);
        if (std::abs(kappa_value) <= sG)
            throw Error(ErrorKind::ProfileCrossesBoundary, "curves with |kappa| <= sqrt(-G) do not close in H2");
        const double R = std::atanh(sG / std::abs(kappa_value)) / sG;  // kappa = sG coth(sG R)
        c.model = Model::PoincareDisc;
        c.length = 2.0 * std::numbers::pi * std::sinh(sG * R) / sG;
        radius = std::tanh(sG * R / 2.0);
    } else {
        if (kappa_value == 0.0) throw Error(ErrorKind::ProfileCrossesBoundary, "straight line does not close");
        c.model = Model::Plane;
        radius = 1.0 / std::abs(kappa_value);
        c.length = 2.0 * std::numbers::pi * radius;
    }
    const double w = 2.0 * std::numbers::pi / c.length * (kappa_value < 0.0 && G <= 0.0 ? -1.0 : 1.0);
    c.scale_r = radius;
    c.point = [radius, w](double s) { return radius * std::exp(cplx(0.0, w * s)); };
    c.velocity = [radius, w](double s) { return I * w * radius * std::exp(cplx(0.0, w * s)); };
    c.acceleration = [radius, w](double s) { return -w * w * radius * std::exp(cplx(0.0, w * s)); };
    c.kappa = [kappa_value](double) { return kappa_value; };
    resample(c, samples);
    return c;
}

// ---------------------------------------------------------------------------
// Hopf lift

struct HopfLift {
    double G = 0.0;
    double length = 0.0;
    std::vector<double> s;
    std::vector<std::array<cplx, 2>> eta;  // unit vectors in C^2 = R^4
    std::vector<double> kappa;
    /// eta(length) = exp(i holonomy) eta(0).
    double holonomy = 0.0;
};

/// Hopf projection S^3 -> C u {inf}, (z1, z2) -> z1 / z2.
[[nodiscard]] inline cplx hopf_project(const std::array<cplx, 2>& e) noexcept { return e[0] / e[1]; }

/// Horizontal lift of a closed curve on the round sphere. The phase of the
/// section (z, 1)/sqrt(1+|z|^2) is integrated by classical RK4, so every
/// sample is unit length and projects exactly onto the curve.
[[nodiscard]] inline HopfLift hopf_lift(const SpaceFormCurve& c, int steps_per_period = 4096, int periods = 1)
{
    if (c.model != Model::RoundSphere) throw Error(ErrorKind::NonSphericalCase, "Hopf lift needs a spherical curve");
    const int count = static_cast<int>(c.samples.size()) - 1;
    if (count < 1) throw Error(ErrorKind::IntegrationFailure, "no samples to lift");
    const int sub = std::max(1, (steps_per_period * std::max(periods, 1) + count - 1) / count);
    const double h = c.length / (static_cast<double>(count) * sub);
    if (!(h > 1e-14 * c.length)) throw Error(ErrorKind::IntegrationFailure, "step size underflow");

    // d phase / ds = -Im(conj(z) z') / (1 + |z|^2)
    auto rate = [&](double x) {
        const cplx z = c.point(x);
        return -(std::conj(z) * c.velocity(x)).imag() / (1.0 + std::norm(z));
    };
    auto section = [](cplx z, double phase) {
        const double nrm = std::sqrt(1.0 + std::norm(z));
        const cplx u = std::exp(cplx(0.0, phase));
        return std::array<cplx, 2>{u * z / nrm, u / nrm};
    };

    HopfLift out;
    out.G = c.G;
    out.length = c.length;
    double phase = 0.0;
    double x = 0.0;
    for (int j = 0; j <= count; ++j) {
        const double xs = c.samples[static_cast<std::size_t>(j)].x;
        out.s.push_back(xs);
        out.eta.push_back(section(c.samples[static_cast<std::size_t>(j)].point, phase));
        out.kappa.push_back(c.samples[static_cast<std::size_t>(j)].kappa);
        if (j == count) break;
        for (int k = 0; k < sub; ++k) {
            const double k1 = rate(x);
            const double k2 = rate(x + 0.5 * h);
            const double k4 = rate(x + h);
            phase += h / 6.0 * (k1 + 4.0 * k2 + k4);
            x += h;
        }
    }
    out.holonomy = std::remainder(phase, 2.0 * std::numbers::pi);
    return out;
}

/// max |<eta', i eta>| over the lift, with a five-point difference stencil.
[[nodiscard]] inline double horizontality_defect(const HopfLift& lift)
{
    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < lift.eta.size(); ++j) {
        const double h = lift.s[j + 1] - lift.s[j];
        cplx ip = 0.0;
        for (std::size_t k = 0; k < 2; ++k) {
            const cplx d = (-lift.eta[j + 2][k] + 8.0 * lift.eta[j + 1][k] - 8.0 * lift.eta[j - 1][k] +
                            lift.eta[j - 2][k]) /
                           (12.0 * h);
            ip += std::conj(lift.eta[j][k]) * d;
        }
        worst = std::max(worst, std::abs(ip.imag()));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Meshes

enum class TorusKind { Revolution, Hopf };

constexpr const char* to_string(TorusKind k) noexcept
{
    return k == TorusKind::Revolution ? "revolution" : "hopf";
}

struct TorusMesh {
    TorusKind kind = TorusKind::Revolution;
    int n_profile = 0;
    int n_fiber = 0;
    std::vector<std::array<double, 3>> vertices;    // Euclidean export
    std::vector<std::array<double, 4>> vertices4;   // S^3, Hopf only
    std::vector<std::array<int, 4>> faces;          // quads, 0-based
};

namespace detail {

inline std::vector<std::array<int, 4>> torus_quads(int P, int Q)
{
    std::vector<std::array<int, 4>> f;
    f.reserve(static_cast<std::size_t>(P) * Q);
    for (int i = 0; i < P; ++i) {
        for (int j = 0; j < Q; ++j) {
            const int i1 = (i + 1) % P;
            const int j1 = (j + 1) % Q;
            f.push_back({i * Q + j, i1 * Q + j, i1 * Q + j1, i * Q + j1});
        }
    }
    return f;
}

inline cplx cayley(cplx z) { return I * (1.0 + z) / (1.0 - z); }

}  // namespace detail

/// Half-plane coordinates of a hyperbolic profile curve.
[[nodiscard]] inline cplx to_upper_half_plane(Model model, cplx z)
{
    switch (model) {
        case Model::UpperHalfPlane: return z;
        case Model::PoincareDisc: return detail::cayley(z);
        default: throw Error(ErrorKind::KindMismatch, "profile must live in the hyperbolic plane");
    }
}

/// Torus of revolution: half-plane samples (u, v) rotated about the u-axis,
/// giving (u, v cos phi, v sin phi). Profile index runs over one closing
/// length with the seam identified.
[[nodiscard]] inline TorusMesh torus_of_revolution_mesh(const SpaceFormCurve& c, int n_profile, int n_fiber)
{
    if (c.model != Model::UpperHalfPlane && c.model != Model::PoincareDisc)
        throw Error(ErrorKind::KindMismatch, "torus of revolution needs a hyperbolic profile");
    TorusMesh m;
    m.kind = TorusKind::Revolution;
    m.n_profile = n_profile;
    m.n_fiber = n_fiber;
    m.vertices.reserve(static_cast<std::size_t>(n_profile) * n_fiber);
    for (int i = 0; i < n_profile; ++i) {
        const cplx w = to_upper_half_plane(c.model, c.point(c.length * i / n_profile));
        if (!(w.imag() > 0.0) || !std::isfinite(w.real()))
            throw Error(ErrorKind::ProfileCrossesBoundary, "profile leaves the upper half plane");
        for (int j = 0; j < n_fiber; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_fiber;
            m.vertices.push_back({w.real(), w.imag() * std::cos(phi), w.imag() * std::sin(phi)});
        }
    }
    m.faces = detail::torus_quads(n_profile, n_fiber);
    return m;
}

/// Point of the Hopf torus f(t, s) = exp(i (t + holonomy s / length)) eta(s);
/// the twist makes the parametrization periodic in s.
[[nodiscard]] inline std::array<double, 4> hopf_torus_point(const HopfLift& lift, std::size_t j, double t)
{
    const double tw = t + lift.holonomy * lift.s[j] / lift.length;
    const cplx u = std::exp(cplx(0.0, -tw));
    const cplx a = u * lift.eta[j][0];
    const cplx b = u * lift.eta[j][1];
    return {a.real(), a.imag(), b.real(), b.imag()};
}

/// Pole among +-e_k farthest from all points, and the stereographic image
/// of each point from it.
[[nodiscard]] inline std::vector<std::array<double, 3>> stereographic_export(
    const std::vector<std::array<double, 4>>& pts)
{
    int best_axis = 0;
    double best_sign = 1.0;
    double best_dist = -1.0;
    for (int k = 0; k < 4; ++k) {
        for (double sgn : {1.0, -1.0}) {
            double dmin = INFINITY;
            for (const auto& p : pts) dmin = std::min(dmin, 1.0 - sgn * p[static_cast<std::size_t>(k)]);
            if (dmin > best_dist) {
                best_dist = dmin;
                best_axis = k;
                best_sign = sgn;
            }
        }
    }
    std::vector<std::array<double, 3>> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
        const double den = 1.0 - best_sign * p[static_cast<std::size_t>(best_axis)];
        std::array<double, 3> q{};
        int c = 0;
        for (int k = 0; k < 4; ++k) {
            if (k == best_axis) continue;
            q[static_cast<std::size_t>(c++)] = p[static_cast<std::size_t>(k)] / den;
        }
        out.push_back(q);
    }
    return out;
}

/// Hopf torus over a lifted closed curve. n_profile must divide the number of
/// lift intervals.
[[nodiscard]] inline TorusMesh hopf_torus_mesh(const HopfLift& lift, int n_profile, int n_fiber)
{
    const int count = static_cast<int>(lift.eta.size()) - 1;
    if (n_profile < 1 || count % n_profile != 0)
        throw Error(ErrorKind::IntegrationFailure, "profile resolution must divide the lift sample count");
    const int stride = count / n_profile;
    TorusMesh m;
    m.kind = TorusKind::Hopf;
    m.n_profile = n_profile;
    m.n_fiber = n_fiber;
    for (int i = 0; i < n_profile; ++i) {
        for (int j = 0; j < n_fiber; ++j) {
            const double t = 2.0 * std::numbers::pi * j / n_fiber;
            m.vertices4.push_back(hopf_torus_point(lift, static_cast<std::size_t>(i * stride), t));
        }
    }
    m.vertices = stereographic_export(m.vertices4);
    m.faces = detail::torus_quads(n_profile, n_fiber);
    return m;
}

struct HopfCurvatureCheck {
    double max_gauss = 0.0;           // |K| of the induced metric
    double max_mean_deviation = 0.0;  // |H - kappa/sqrt(G)|
};

/// Gauss and mean curvature of the Hopf torus in S^3 from finite differences
/// of the sampled parametrization, at every lift sample and n_fiber fibre
/// angles. K = 1 + det II / det I (Gauss equation in S^3).
[[nodiscard]] inline HopfCurvatureCheck hopf_curvature_check(const HopfLift& lift, int n_fiber = 256)
{
    using V4 = std::array<double, 4>;
    auto sub = [](const V4& a, const V4& b) { return V4{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; };
    auto add = [](const V4& a, const V4& b) { return V4{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; };
    auto mul = [](const V4& a, double s) { return V4{a[0] * s, a[1] * s, a[2] * s, a[3] * s}; };
    auto dot = [](const V4& a, const V4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; };
    auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    // unit vector orthogonal to x, y, z in R^4
    auto normal = [&](const V4& x, const V4& y, const V4& z) {
        V4 n{det3(x[1], x[2], x[3], y[1], y[2], y[3], z[1], z[2], z[3]),
             -det3(x[0], x[2], x[3], y[0], y[2], y[3], z[0], z[2], z[3]),
             det3(x[0], x[1], x[3], y[0], y[1], y[3], z[0], z[1], z[3]),
             -det3(x[0], x[1], x[2], y[0], y[1], y[2], z[0], z[1], z[2])};
        return mul(n, 1.0 / std::sqrt(dot(n, n)));
    };

    const int count = static_cast<int>(lift.eta.size()) - 1;
    const double hs = lift.length / count;
    const double ht = 2.0 * std::numbers::pi / n_fiber;
    const double sG = std::sqrt(lift.G);
    auto F = [&](int i, int j) {
        const int ii = ((i % count) + count) % count;
        return hopf_torus_point(lift, static_cast<std::size_t>(ii), ht * j);
    };

    HopfCurvatureCheck out;
    double sign = 0.0;
    std::vector<std::pair<double, double>> hk;
    for (int i = 1; i < count; ++i) {
        for (int j = 0; j < n_fiber; j += std::max(1, n_fiber / 16)) {
            const V4 f = F(i, j);
            const V4 fs = mul(sub(F(i + 1, j), F(i - 1, j)), 0.5 / hs);
            const V4 ft = mul(sub(F(i, j + 1), F(i, j - 1)), 0.5 / ht);
            const V4 fss = mul(add(sub(F(i + 1, j), mul(f, 2.0)), F(i - 1, j)), 1.0 / (hs * hs));
            const V4 ftt = mul(add(sub(F(i, j + 1), mul(f, 2.0)), F(i, j - 1)), 1.0 / (ht * ht));
            const V4 fst = mul(add(sub(F(i + 1, j + 1), F(i + 1, j - 1)), sub(F(i - 1, j - 1), F(i - 1, j + 1))),
                               0.25 / (hs * ht));
            const V4 N = normal(f, fs, ft);
            const double E = dot(fs, fs), Fm = dot(fs, ft), Gm = dot(ft, ft);
            const double e = dot(fss, N), fm = dot(fst, N), g = dot(ftt, N);
            const double detI = E * Gm - Fm * Fm;
            const double K = 1.0 + (e * g - fm * fm) / detI;
            const double H = (e * Gm - 2.0 * fm * Fm + g * E) / (2.0 * detI);
            out.max_gauss = std::max(out.max_gauss, std::abs(K));
            hk.emplace_back(H, lift.kappa[static_cast<std::size_t>(i)] / sG);
            sign += H * lift.kappa[static_cast<std::size_t>(i)];
        }
    }
    // the normal orientation is a convention; fix it once for the whole torus
    const double s = sign < 0.0 ? -1.0 : 1.0;
    for (const auto& [H, k] : hk) out.max_mean_deviation = std::max(out.max_mean_deviation, std::abs(s * H - k));
    return out;
}

// ---------------------------------------------------------------------------
// Integral invariants

namespace detail {

inline void require_kind(const ClosingSolution& sol, TorusKind kind)
{
    if (kind == TorusKind::Hopf && (sol.caseTag != ClosingCase::Sphere || !(sol.G > 0.0)))
        throw Error(ErrorKind::KindMismatch, "Hopf tori need a spherical curve");
    if (kind == TorusKind::Revolution && (sol.caseTag == ClosingCase::Sphere || !(sol.G < 0.0)))
        throw Error(ErrorKind::KindMismatch, "tori of revolution need a hyperbolic profile");
}

/// Trapezoidal rule over one closing length; spectrally accurate because the
/// integrand is periodic.
template <typename F>
double periodic_integral(F&& f, double length, int count)
{
    double sum = 0.0;
    for (int j = 0; j < count; ++j) sum += f(length * j / count);
    return sum * length / count;
}

}  // namespace detail

/// Closed-form Willmore energy. Revolution: (pi/2) int kappa^2 ds, Hopf:
/// (pi/sqrt G) int (kappa^2 + G) ds, both for the curve rescaled to |G| = 1.
[[nodiscard]] inline double willmore_energy(const ClosingSolution& sol, const Lattice& L, TorusKind kind)
{
    detail::require_kind(sol, kind);
    const double n = sol.n;
    const double pi = std::numbers::pi;
    if (kind == TorusKind::Revolution)
        return (8.0 * n * L.eta1() * pi - 4.0 * n * L.omega1() * L.e3() * pi) / std::sqrt(-sol.G);
    return (16.0 * n * L.eta1() * pi - 8.0 * n * L.omega1() * sol.E * pi) / std::sqrt(sol.G);
}

/// The same energies by quadrature of the curvature of the normalized curve.
[[nodiscard]] inline double willmore_energy_quadrature(const SpaceFormCurve& c, TorusKind kind, int count = 4096)
{
    const double pi = std::numbers::pi;
    if (kind == TorusKind::Revolution) {
        if (!(c.G < 0.0)) throw Error(ErrorKind::KindMismatch, "tori of revolution need a hyperbolic profile");
        const double k2 = detail::periodic_integral([&](double x) { const double k = c.kappa(x); return k * k; },
                                                    c.length, count);
        return 0.5 * pi * k2 / std::sqrt(-c.G);
    }
    if (!(c.G > 0.0)) throw Error(ErrorKind::KindMismatch, "Hopf tori need a spherical curve");
    const double k2 = detail::periodic_integral([&](double x) { const double k = c.kappa(x); return k * k + c.G; },
                                                c.length, count);
    return pi * k2 / std::sqrt(c.G);
}

struct EnergyIdentity {
    double lhs = 0.0;  // int (kappa^2 + (2/3)(mu+G)) over 2 n omega1
    double rhs = 0.0;  // 16 n eta1
};

[[nodiscard]] inline EnergyIdentity energy_identity(const ClosingSolution& sol, const CurveFamily& fam,
                                                    int count = 4096)
{
    const ElasticParams p = params_of_family(fam);
    const double len = 2.0 * sol.n * fam.L.omega1();
    EnergyIdentity e;
    e.lhs = detail::periodic_integral([&](double x) { const double k = kappa(x, fam, p); return k * k; }, len, count) +
            2.0 / 3.0 * p.mu_plus_G() * len;
    e.rhs = 16.0 * sol.n * fam.L.eta1();
    return e;
}

/// Generators (z1, z2) of the conformal class. Revolution: z1 = 2 pi,
/// z2 = i sqrt|G| L. Hopf: z1 = 2 pi, z2 = G A / 2 + i sqrt(G) L / 2.
[[nodiscard]] inline std::array<cplx, 2> conformal_class(const ClosingSolution& sol, const Lattice& L, TorusKind kind,
                                                         double area_A = 0.0)
{
    detail::require_kind(sol, kind);
    const double len = 2.0 * sol.n * L.omega1();
    const cplx z1 = 2.0 * std::numbers::pi;
    if (kind == TorusKind::Revolution) return {z1, cplx(0.0, std::sqrt(-sol.G) * len)};
    return {z1, cplx(0.5 * sol.G * area_A, 0.5 * std::sqrt(sol.G) * len)};
}

/// Winding number entering Gauss-Bonnet: 2 g(rho) = (m_eff / n) pi i.
[[nodiscard]] inline int effective_winding(const ClosingSolution& sol) noexcept
{
    return sol.m + sol.branch * sol.n;
}

/// Half the total curvature over the closing length from the sigma
/// quasi-periodicity, modulo 2 pi:
///   (1/2) int kappa = -4 i n eta1 x0 + 2 n omega1 (kappa0/2 + 2 i zeta(x0)).
[[nodiscard]] inline double half_total_curvature(const ClosingSolution& sol, const CurveFamily& fam)
{
    const double n = sol.n;
    const double k0 = kappa_at_origin(fam);
    const cplx v = -4.0 * I * n * fam.L.eta1() * fam.x0 +
                   2.0 * n * fam.L.omega1() * (0.5 * k0 + 2.0 * I * fam.L.zeta(fam.x0));
    return v.real();
}

namespace detail {

inline double reduce_area(double G, double half_GA)
{
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(half_GA, two_pi);
    if (r < 0.0) r += two_pi;
    return 2.0 * r / G;
}

}  // namespace detail

/// Oriented enclosed area on the sphere, reduced to [0, 4 pi / G), from
/// (1/2) G A = pi m - (1/2) int kappa with the closed-form total curvature.
[[nodiscard]] inline double enclosed_area(const ClosingSolution& sol, const CurveFamily& fam)
{
    const double G = params_of_family(fam).G;
    if (!(G > 0.0)) throw Error(ErrorKind::NonSphericalCase, "enclosed area is defined for spherical curves");
    return detail::reduce_area(G, std::numbers::pi * effective_winding(sol) - half_total_curvature(sol, fam));
}

/// Same quantity with int kappa ds by quadrature (Gauss-Bonnet).
[[nodiscard]] inline double enclosed_area_gauss_bonnet(const ClosingSolution& sol, const CurveFamily& fam,
                                                       int count = 4096)
{
    const ElasticParams p = params_of_family(fam);
    if (!(p.G > 0.0)) throw Error(ErrorKind::NonSphericalCase, "enclosed area is defined for spherical curves");
    const double len = 2.0 * sol.n * fam.L.omega1();
    const double total = detail::periodic_integral([&](double x) { return kappa(x, fam, p); }, len, count);
    return detail::reduce_area(p.G, std::numbers::pi * effective_winding(sol) - 0.5 * total);
}

/// Distance between two areas on the circle of circumference 4 pi / G.
[[nodiscard]] inline double area_distance(double G, double a, double b)
{
    const double period = 4.0 * std::numbers::pi / G;
    return std::abs(std::remainder(a - b, period));
}

enum class CMCType { H3_small_H, S3, H3_large_H };

constexpr const char* to_string(CMCType t) noexcept
{
    switch (t) {
        case CMCType::H3_small_H: return "H3_small_H";
        case CMCType::S3: return "S3";
        case CMCType::H3_large_H: return "H3_large_H";
    }
    return "unknown";
}

[[nodiscard]] inline CMCType cmc_classify(double E, const Lattice& L)
{
    if (L.wavelike()) return CMCType::H3_small_H;
    const double v = L.invariants().p3(E);
    const double scale = 1.0 + std::abs(L.g2() * E) + std::abs(L.g3()) + 4.0 * std::abs(E * E * E);
    if (std::abs(v) <= 1e-12 * scale) throw Error(ErrorKind::BranchPoint, "P3(E) = 0");
    return v < 0.0 ? CMCType::S3 : CMCType::H3_large_H;
}

[[nodiscard]] inline CMCType cmc_classify(const ClosingSolution& sol, const Lattice& L)
{
    return cmc_classify(sol.E, L);
}

struct TorusReport {
    TorusKind kind = TorusKind::Revolution;
    double willmore = 0.0;
    double willmore_quadrature = 0.0;
    cplx z1{};
    cplx z2{};
    double length_L = 0.0;
    double area_A = 0.0;  // spherical curves only, mod 4 pi / G
    int n = 1;
    int m = 0;
};

[[nodiscard]] inline TorusReport torus_report(const ClosingSolution& sol, const CurveFamily& fam,
                                              const SpaceFormCurve& curve, TorusKind kind, int count = 4096)
{
    TorusReport r;
    r.kind = kind;
    r.n = sol.n;
    r.m = sol.m;
    r.willmore = willmore_energy(sol, fam.L, kind);
    r.willmore_quadrature = willmore_energy_quadrature(curve, kind, count);
    r.length_L = 2.0 * sol.n * fam.L.omega1();
    if (kind == TorusKind::Hopf) r.area_A = enclosed_area(sol, fam);
    const auto z = conformal_class(sol, fam.L, kind, r.area_A);
    r.z1 = z[0];
    r.z2 = z[1];
    return r;
}

}  // namespace willmore
