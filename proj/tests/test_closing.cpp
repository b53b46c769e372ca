#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "willmore/closing.hpp"

using namespace willmore;
using std::numbers::pi;

namespace {

double affine_gap(const CurveFamily& fam, int n)
{
    const cplx a = affine_point(0.0, fam);
    const cplx b = affine_point(2.0 * n * fam.L.omega1(), fam);
    return std::abs(a - b) / (1.0 + std::abs(a));
}

void expect_angle_identity(const ClosingSolution& s, const Lattice& L)
{
    const cplx two_g = 2.0 * monodromy_angle(s.rho, L);
    EXPECT_LE(std::abs(two_g.real()), 1e-9);
    EXPECT_LE(std::abs(two_g.imag() - pi * s.target()), 1e-9);
    // closing after n periods needs 2 g n in pi i Z
    const double turns = two_g.imag() * s.n / pi;
    EXPECT_NEAR(turns, std::round(turns), 1e-8);
}

}  // namespace

TEST(Angle, VanishesAtRealHalfPeriod)
{
    for (const auto& [g2, g3] : {std::pair{4.0, 0.0}, {0.0, -4.0}, {1.0, 1.0}, {5.0, 1.0}}) {
        const auto L = Lattice::from_invariants(g2, g3);
        EXPECT_LE(std::abs(monodromy_angle(L.omega1(), L)), 1e-12);
    }
}

TEST(Angle, ValueAtImaginaryHalfPeriod)
{
    for (const auto& [g2, g3] : {std::pair{4.0, 0.0}, {0.0, -4.0}, {1.0, 1.0}, {5.0, 1.0}}) {
        const auto L = Lattice::from_invariants(g2, g3);
        const cplx expected = L.orbitlike() ? I * (pi / 2.0) : I * pi;
        EXPECT_LE(std::abs(monodromy_angle(L.omega3(), L) - expected), 1e-10) << g2 << ' ' << g3;
    }
}

TEST(Angle, DivergesAtOrigin)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    double prev = 0.0;
    for (const double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const cplx g = monodromy_angle(I * t, L);
        EXPECT_GT(g.imag(), prev);
        prev = g.imag();
        EXPECT_NEAR(monodromy_angle(-I * t, L).imag(), -g.imag(), 1e-9 * std::abs(g));
    }
    EXPECT_GT(prev, 1e3);
}

TEST(Angle, ImaginaryOnVerticalSegments)
{
    for (const auto& [g2, g3] : {std::pair{4.0, 0.0}, {5.0, 1.0}}) {
        const auto L = Lattice::from_invariants(g2, g3);
        const double top = L.omega3().imag();
        for (int j = 1; j < 32; ++j) {
            const double t = top * j / 32;
            EXPECT_LE(std::abs(monodromy_angle(I * t, L).real()), 1e-10);
            EXPECT_LE(std::abs(monodromy_angle(L.omega1() + I * t, L).real()), 1e-10);
        }
        // hyperbolic orbitlike segment runs from g = 0 to g = i pi / 2
        EXPECT_LE(std::abs(monodromy_angle(L.omega1() + L.omega3(), L) - I * (pi / 2.0)), 1e-10);
    }
}

TEST(Angle, RatioIsAffineMultiplier)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const double w3 = L.omega3().imag();
    const auto fam = make_family(L, I * (0.3 * w3), I * (0.45 * w3));
    for (const double x : {0.1, 0.7, 1.9}) {
        const cplx ratio = affine_point(x + 2.0 * L.omega1(), fam) / affine_point(x, fam);
        EXPECT_LE(std::abs(ratio - monodromy_ratio(fam.rho, L)), 1e-9 * std::abs(ratio));
    }
}

TEST(SpaceForm, PlanarLimitAndSigns)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto flat = spaceform_from_sympoint(L.e3(), L);
    EXPECT_EQ(flat.G, 0.0);
    EXPECT_GT(spaceform_from_sympoint(L.e3() - 0.5, L).G, 0.0);
    EXPECT_LT(spaceform_from_sympoint(L.e3() + 0.5, L).G, 0.0);
    for (const double E : {-3.0, -1.2, 0.4, 2.0}) {
        const auto sf = spaceform_from_sympoint(E, L);
        EXPECT_NEAR((sf.mu + sf.G) / 6.0, L.e3(), 1e-12);
        EXPECT_NEAR((sf.mu - sf.G / 2.0) / 6.0, E, 1e-12);
    }
}

TEST(Sphere, LemniscaticHalfTurn)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_sphere(L, 1, 2);
    EXPECT_EQ(s.m, 1);
    EXPECT_EQ(s.n, 2);
    EXPECT_EQ(s.cover, 1);
    EXPECT_EQ(s.caseTag, ClosingCase::Sphere);
    EXPECT_LE(s.residual, 1e-9);
    EXPECT_GT(s.G, 0.0);
    EXPECT_EQ(s.rho.real(), 0.0);
    EXPECT_GT(s.rho.imag(), 0.0);
    EXPECT_LT(s.rho.imag(), L.omega3().imag());
    EXPECT_NEAR(L.wp(s.rho).real(), s.E, 1e-10 * (1.0 + std::abs(s.E)));
    expect_angle_identity(s, L);

    const auto fam = elastic_family(s, L);
    EXPECT_LE(projective_closure_error(fam, s.n), 1e-6);
    EXPECT_LE(affine_gap(fam, s.n), 1e-6);
    // one period alone does not close
    EXPECT_GT(affine_gap(fam, 1), 1e-3);
}

TEST(Sphere, SingleLobeNeedsBranchShift)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_sphere(L, 1, 1);
    EXPECT_LE(s.residual, 1e-9);
    expect_angle_identity(s, L);
    EXPECT_LE(projective_closure_error(elastic_family(s, L), 1), 1e-6);
}

TEST(Sphere, TargetOutOfRangeWithoutBranchShift)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    ClosingOptions opt;
    opt.allow_branch_shift = false;
    try {
        (void)solve_closing_sphere(L, 1, 2, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TargetOutOfRange);
    }
}

TEST(Sphere, ManyPairsClose)
{
    for (const auto& [g2, g3] : {std::pair{4.0, 0.0}, {5.0, 1.0}, {1.0, 1.0}}) {
        const auto L = Lattice::from_invariants(g2, g3);
        for (const auto& [m, n] : {std::pair{1, 2}, {1, 3}, {2, 3}, {3, 5}}) {
            ClosingOptions opt;
            opt.max_branches = 3;
            const auto all = solve_closing_sphere_all(L, m, n, opt);
            ASSERT_FALSE(all.empty()) << g2 << ' ' << g3 << ' ' << m << '/' << n;
            for (const auto& s : all) {
                EXPECT_LE(s.residual, 1e-9);
                expect_angle_identity(s, L);
                EXPECT_GT(s.G, 0.0);
                EXPECT_LE(projective_closure_error(elastic_family(s, L), s.n), 1e-6);
            }
        }
    }
}

TEST(Sphere, CommonFactorIsReduced)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto a = solve_closing_sphere(L, 2, 4);
    const auto b = solve_closing_sphere(L, 1, 2);
    EXPECT_EQ(a.m, 1);
    EXPECT_EQ(a.n, 2);
    EXPECT_EQ(a.cover, 2);
    EXPECT_EQ(a.rho, b.rho);
}

TEST(Sphere, NonPositiveLobeCountIsUsageError)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    EXPECT_THROW((void)solve_closing_sphere(L, 1, 0), std::invalid_argument);
    EXPECT_THROW((void)solve_closing_sphere(L, 1, -2), std::invalid_argument);
}

TEST(HyperbolicOrbitlike, LemniscaticHalfTurn)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_hyperbolic_orbitlike(L, 1, 2);
    EXPECT_EQ(s.caseTag, ClosingCase::HyperbolicOrbitlike);
    EXPECT_LE(s.residual, 1e-9);
    EXPECT_EQ(s.rho.real(), L.omega1());
    EXPECT_LT(s.G, 0.0);
    EXPECT_LT(L.invariants().p3(s.E), 0.0);
    expect_angle_identity(s, L);
    EXPECT_LE(projective_closure_error(elastic_family(s, L), s.n), 1e-6);
    EXPECT_LE(affine_gap(elastic_family(s, L), s.n), 1e-6);
}

TEST(HyperbolicOrbitlike, WavelikeLatticeIsRejected)
{
    const auto L = Lattice::from_invariants(0.0, -4.0);
    try {
        (void)solve_closing_hyperbolic_orbitlike(L, 1, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::WrongDiscriminant);
    }
}

TEST(HyperbolicWavelike, CriterionFailsNoCurve)
{
    const auto L = Lattice::from_invariants(1.0, 1.0);
    EXPECT_FALSE(wavelike_closing_criterion(L));
    EXPECT_FALSE(solve_closing_hyperbolic_wavelike(L).has_value());
}

TEST(HyperbolicWavelike, CriterionHoldsOneCurve)
{
    const auto L = Lattice::from_invariants(0.0, -4.0);
    EXPECT_TRUE(wavelike_closing_criterion(L));
    const auto s = solve_closing_hyperbolic_wavelike(L);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(s->caseTag, ClosingCase::HyperbolicWavelike);
    EXPECT_EQ(s->m, 0);
    EXPECT_EQ(s->n, 1);
    EXPECT_EQ(s->rho.imag(), 0.0);
    EXPECT_GT(s->rho.real(), 0.0);
    EXPECT_LT(s->rho.real(), L.omega1());
    EXPECT_GT(std::abs(s->rho.real() - L.omega1()), 1e-3);
    EXPECT_LE(s->residual, 1e-9);
    EXPECT_NEAR(s->rho.real(), 1.40218, 1e-5);
    // the partner 2 omega1 - rho closes as well
    EXPECT_LE(std::abs(monodromy_angle(2.0 * L.omega1() - s->rho, L)), 1e-9);
    EXPECT_LE(projective_closure_error(elastic_family(*s, L), 1), 1e-6);
}

TEST(HyperbolicWavelike, OrbitlikeLatticeIsRejected)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    EXPECT_THROW((void)solve_closing_hyperbolic_wavelike(L), Error);
}

TEST(HyperbolicWavelike, CriterionMatchesDenseScan)
{
    // a root of g on (0, omega1) away from omega1 exists iff the criterion holds
    int with = 0, without = 0;
    for (double g2 = -6.0; g2 <= 3.0; g2 += 1.5) {
        for (const double g3 : {-3.0, -1.0, 0.5, 2.0}) {
            if (!(discriminant(g2, g3) < -1e-3)) continue;
            const auto L = Lattice::from_invariants(g2, g3);
            const double w1 = L.omega1();
            bool found = false;
            double prev = monodromy_angle(1e-3 * w1, L).real();
            for (int j = 2; j < 4000; ++j) {
                const double t = w1 * j / 4000.0;
                if (t > w1 * (1.0 - 1e-3)) break;
                const double cur = monodromy_angle(t, L).real();
                if ((prev < 0.0) != (cur < 0.0)) found = true;
                prev = cur;
            }
            EXPECT_EQ(found, wavelike_closing_criterion(L)) << g2 << ' ' << g3;
            EXPECT_EQ(found, solve_closing_hyperbolic_wavelike(L).has_value());
            (found ? with : without) += 1;
        }
    }
    EXPECT_GT(with, 0);
    EXPECT_GT(without, 0);
}

TEST(Sweep, SingleStepIsElasticFamily)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_sphere(L, 1, 2);
    const auto sweep = isospectral_sweep(s, L, 1);
    ASSERT_EQ(sweep.size(), 1u);
    const auto fam = elastic_family(s, L);
    EXPECT_EQ(sweep[0].x0, fam.x0);
    EXPECT_EQ(sweep[0].rho, fam.rho);
}

TEST(Sweep, MembersShareMonodromyAndClose)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_sphere(L, 1, 2);
    const auto sweep = isospectral_sweep(s, L, 6);
    ASSERT_GE(sweep.size(), 4u);
    for (const auto& fam : sweep) {
        EXPECT_EQ(fam.rho, s.rho);
        EXPECT_LE(std::abs(2.0 * monodromy_angle(fam.rho, L) - I * (pi * s.target())), 1e-9);
        EXPECT_LE(projective_closure_error(fam, s.n), 1e-6);
    }
}

TEST(Sweep, ElasticMemberCurvatureExtremaAreRoots)
{
    const auto L = Lattice::from_invariants(4.0, 0.0);
    const auto s = solve_closing_sphere(L, 1, 2);
    const auto fam = isospectral_sweep(s, L, 4).front();
    const auto p = elastic_params(s, L);
    EXPECT_EQ(p.lambda, 0.0);
    double lo = 1e300, hi = -1e300;
    for (int j = 0; j <= 4000; ++j) {
        const double k = kappa(2.0 * L.omega1() * j / 4000, fam, p);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    const auto r = quartic_real_roots(p);
    EXPECT_NEAR(std::max(std::abs(lo), std::abs(hi)), std::max(std::abs(r.front()), std::abs(r.back())), 1e-6);
}

TEST(WillmoreHopf, WavelikeSphericalCurveWithHalfMu)
{
    const auto w = solve_willmore_hopf(1, 2);
    EXPECT_LT(w.nu, 0.0);
    EXPECT_TRUE(w.L.wavelike());
    EXPECT_NEAR(w.L.e3(), 1.0 / 12.0, 1e-12);
    EXPECT_NEAR(w.sol.E, -1.0 / 6.0, 1e-10);
    EXPECT_NEAR(w.sol.G, 1.0, 1e-9);
    EXPECT_NEAR(w.sol.mu, -0.5, 1e-9);
    EXPECT_LE(w.sol.residual, 1e-9);
    expect_angle_identity(w.sol, w.L);

    const auto p = elastic_params(w.sol, w.L);
    EXPECT_EQ(p.lambda, 0.0);
    EXPECT_NEAR(p.nu, w.nu, 1e-9);
    EXPECT_LE(projective_closure_error(elastic_family(w.sol, w.L), w.sol.n), 1e-6);
}
