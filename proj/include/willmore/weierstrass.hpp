#pragma once

// Weierstrass elliptic functions for real invariants (g2, g3).
//
// Evaluation goes through a Gauss-reduced basis of the period lattice and the
// trigonometric (Lambert) series in the nome q = exp(i pi tau), |q| <= 0.07.
// Arguments are first reduced into the fundamental cell centred at 0; the
// quasi-periodicity of zeta and sigma is then applied exactly by integer
// bookkeeping, so large arguments never enter the series.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "willmore/errors.hpp"
#include "willmore/polynomial.hpp"

namespace willmore {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

[[nodiscard]] constexpr double discriminant(double g2, double g3) noexcept
{
    return g2 * g2 * g2 - 27.0 * g3 * g3;
}

struct LatticeInvariants {
    double g2 = 0.0;
    double g3 = 0.0;
    double disc = 0.0;

    [[nodiscard]] static LatticeInvariants make(double g2, double g3) noexcept
    {
        return {g2, g3, discriminant(g2, g3)};
    }

    /// P3(x) = 4x^3 - g2 x - g3.
    template <typename T>
    [[nodiscard]] T p3(T x) const
    {
        return 4.0 * x * x * x - g2 * x - g3;
    }

    [[nodiscard]] std::array<double, 4> p3_coefficients() const noexcept { return {-g3, -g2, 0.0, 4.0}; }

    /// D = 0 up to rounding of the cubic terms. Such invariants may be
    /// classified but never turned into a lattice.
    [[nodiscard]] bool degenerate() const noexcept
    {
        const double scale = std::abs(g2 * g2 * g2) + 27.0 * g3 * g3;
        return scale == 0.0 || std::abs(disc) <= 1e-12 * scale;
    }
};

namespace detail {

[[nodiscard]] inline double agm(double a, double b)
{
    for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * std::abs(a); ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

/// Least positive real half-period, i.e. the integral of dt / sqrt(P3(t)) from
/// the largest real root of P3 to infinity, via the arithmetic-geometric mean.
[[nodiscard]] inline double real_half_period(double g2, double g3)
{
    const auto inv = LatticeInvariants::make(g2, g3);
    const auto c = inv.p3_coefficients();
    const auto rs = poly::roots(c);
    if (inv.disc > 0.0) {
        auto real = poly::real_roots(c);
        if (real.size() != 3) throw Error(ErrorKind::DegenerateLattice, "expected three real roots of P3");
        const double e1 = real[2], e2 = real[1], e3 = real[0];
        return std::numbers::pi / (2.0 * agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2)));
    }
    double er = 0.0;
    cplx ec{};
    for (const auto& r : rs) {
        if (r.value.imag() == 0.0) er = r.value.real();
        else ec = r.value;
    }
    const cplx s = std::sqrt(er - ec);
    return std::numbers::pi / (2.0 * agm(s.real(), std::abs(s)));
}

}  // namespace detail

/// A point z written as z = reduced + shift, shift = 2a w_a + 2b w_b for the
/// reduced half-period basis (w_a, w_b) of the lattice.
struct CellPoint {
    cplx reduced;
    cplx shift;
    int a = 0;
    int b = 0;
};

struct LatticeOptions {
    /// Evaluations closer than pole_cutoff * omega1 to a lattice point throw.
    double pole_cutoff = 1e-8;
};

/// The period lattice of real invariants together with everything needed to
/// evaluate wp, wp', zeta and sigma on it. Immutable after construction.
class Lattice
{
public:
    [[nodiscard]] static Lattice from_invariants(double g2, double g3, LatticeOptions opts = {})
    {
        return Lattice(g2, g3, opts);
    }

    [[nodiscard]] const LatticeInvariants& invariants() const noexcept { return inv_; }
    [[nodiscard]] double g2() const noexcept { return inv_.g2; }
    [[nodiscard]] double g3() const noexcept { return inv_.g3; }
    [[nodiscard]] bool orbitlike() const noexcept { return inv_.disc > 0.0; }
    [[nodiscard]] bool wavelike() const noexcept { return inv_.disc < 0.0; }

    /// Real half-period; wp(omega1) is the largest real root of P3.
    [[nodiscard]] double omega1() const noexcept { return omega1_; }
    /// Half-lattice point on the positive imaginary axis; wp(omega3) is the
    /// smallest real root of P3. For D < 0 it is congruent to omega1.
    [[nodiscard]] cplx omega3() const noexcept { return omega3_; }
    [[nodiscard]] double eta1() const noexcept { return eta1_; }
    [[nodiscard]] cplx eta3() const noexcept { return eta3_; }

    /// Full periods of the reduced basis (generate the lattice).
    [[nodiscard]] std::array<cplx, 2> generators() const noexcept { return {2.0 * wa_, 2.0 * wb_}; }
    /// Half-periods of the reduced basis with their quasi-periods zeta(w).
    [[nodiscard]] std::array<cplx, 2> half_generators() const noexcept { return {wa_, wb_}; }
    [[nodiscard]] std::array<cplx, 2> generator_etas() const noexcept { return {eta_a_, eta_b_}; }
    [[nodiscard]] cplx nome() const noexcept { return q_; }

    /// Real roots of P3 in increasing order (one or three).
    [[nodiscard]] const std::vector<double>& real_roots() const noexcept { return roots_; }
    [[nodiscard]] double e1() const noexcept { return roots_.back(); }
    [[nodiscard]] double e3() const noexcept { return roots_.front(); }

    [[nodiscard]] double pole_cutoff() const noexcept { return opts_.pole_cutoff * omega1_; }

    [[nodiscard]] CellPoint reduce_to_cell(cplx z) const noexcept
    {
        const cplx A = 2.0 * wa_, B = 2.0 * wb_;
        const double det = cross(A, B);
        const double s = cross(z, B) / det;
        const double t = cross(A, z) / det;
        const int a = static_cast<int>(std::lround(s));
        const int b = static_cast<int>(std::lround(t));
        const cplx shift = static_cast<double>(a) * A + static_cast<double>(b) * B;
        return {z - shift, shift, a, b};
    }

    /// Quasi-period of the lattice vector 2a w_a + 2b w_b.
    [[nodiscard]] cplx quasi_period(int a, int b) const noexcept
    {
        return 2.0 * (static_cast<double>(a) * eta_a_ + static_cast<double>(b) * eta_b_);
    }

    [[nodiscard]] double distance_to_lattice(cplx z) const noexcept
    {
        const cplx r = reduce_to_cell(z).reduced;
        const cplx A = 2.0 * wa_, B = 2.0 * wb_;
        double best = std::abs(r);
        for (const cplx p : {A, -A, B, -B, A + B, -A - B, A - B, B - A}) best = std::min(best, std::abs(r - p));
        return best;
    }

    [[nodiscard]] cplx wp(cplx z) const
    {
        const auto cp = checked(z);
        return series(cp.reduced).wp;
    }

    [[nodiscard]] cplx wp_prime(cplx z) const
    {
        const auto cp = checked(z);
        return series(cp.reduced).wp_prime;
    }

    [[nodiscard]] cplx zeta(cplx z) const
    {
        const auto cp = checked(z);
        return series(cp.reduced).zeta + quasi_period(cp.a, cp.b);
    }

    /// log sigma(z), branch fixed by the series and the quasi-periodicity
    /// bookkeeping; exp() of it is sigma(z). Diverges to -inf at lattice points.
    [[nodiscard]] cplx log_sigma(cplx z) const
    {
        const auto cp = reduce_to_cell(z);
        cplx val = series_log_sigma(cp.reduced);
        const cplx eta = quasi_period(cp.a, cp.b);
        val += eta * (cp.reduced + 0.5 * cp.shift);
        const long parity = (static_cast<long>(cp.a) + cp.b + static_cast<long>(cp.a) * cp.b) & 1L;
        if (parity != 0) val += I * std::numbers::pi;
        return val;
    }

    [[nodiscard]] cplx sigma(cplx z) const
    {
        const auto cp = reduce_to_cell(z);
        if (cp.reduced == cplx{0.0, 0.0}) return {0.0, 0.0};
        return std::exp(log_sigma(z));
    }

private:
    struct SeriesValues {
        cplx wp, wp_prime, zeta;
    };

    Lattice(double g2, double g3, LatticeOptions opts) : inv_(LatticeInvariants::make(g2, g3)), opts_(opts)
    {
        if (inv_.degenerate())
            throw Error(ErrorKind::DegenerateLattice, "discriminant g2^3 - 27 g3^2 vanishes");
        roots_ = poly::real_roots(inv_.p3_coefficients());

        omega1_ = detail::real_half_period(g2, g3);
        // The lattice of (g2, -g3) is the current one rotated by i.
        const double omega_im = detail::real_half_period(g2, -g3);
        omega3_ = I * omega_im;

        cplx A, B;
        if (orbitlike()) {
            A = 2.0 * omega1_;
            B = 2.0 * omega3_;
        } else {
            A = omega1_ + omega3_;
            B = -omega1_ + omega3_;
        }
        gauss_reduce(A, B);
        wa_ = 0.5 * A;
        wb_ = 0.5 * B;
        const cplx tau = wb_ / wa_;
        q_ = std::exp(I * std::numbers::pi * tau);

        const cplx q2 = q_ * q_;
        cplx q2n = 1.0;
        const double aq = std::abs(q_);
        for (int n = 1; n <= kMaxTerms; ++n) {
            q2n *= q2;
            q2n_.push_back(q2n);
            lambert_.push_back(q2n / (1.0 - q2n));
            if (std::pow(aq, n) < 1e-18) break;
        }

        cplx e2 = 1.0;
        for (std::size_t n = 0; n < lambert_.size(); ++n) e2 -= 24.0 * static_cast<double>(n + 1) * lambert_[n];
        eta_a_ = std::numbers::pi * std::numbers::pi / (12.0 * wa_) * e2;
        // Legendre relation for a positively oriented basis.
        eta_b_ = (eta_a_ * wb_ - I * (std::numbers::pi / 2.0)) / wa_;

        eta1_ = half_period_eta(omega1_).real();
        eta3_ = half_period_eta(omega3_);
    }

    static double cross(cplx u, cplx v) noexcept { return u.real() * v.imag() - u.imag() * v.real(); }

    static void gauss_reduce(cplx& A, cplx& B)
    {
        for (int it = 0; it < 100; ++it) {
            if (std::abs(B) < std::abs(A)) std::swap(A, B);
            const double m = std::round((B / A).real());
            if (m == 0.0) break;
            B -= m * A;
        }
        if ((B / A).imag() < 0.0) B = -B;
    }

    /// zeta at a half-lattice point, from the integer coordinates of w in the
    /// reduced half-period basis.
    cplx half_period_eta(cplx w) const
    {
        const double det = cross(wa_, wb_);
        const double s = std::round(cross(w, wb_) / det);
        const double t = std::round(cross(wa_, w) / det);
        return s * eta_a_ + t * eta_b_;
    }

    CellPoint checked(cplx z) const
    {
        const auto cp = reduce_to_cell(z);
        if (distance_to_lattice(cp.reduced) < pole_cutoff())
            throw Error(ErrorKind::PoleProximity, "argument is within the pole cutoff of a lattice point");
        return cp;
    }

    SeriesValues series(cplx z) const
    {
        const double pi = std::numbers::pi;
        const cplx k = pi / (2.0 * wa_);
        const cplx v = k * z;
        const cplx s = std::sin(v), c = std::cos(v);
        const cplx cot = c / s;
        const cplx csc2 = 1.0 / (s * s);

        const cplx u = std::exp(2.0 * I * v);
        const cplx uinv = 1.0 / u;
        cplx un = 1.0, uinvn = 1.0;
        cplx sum_sin{}, sum_ncos{}, sum_n2sin{};
        for (std::size_t i = 0; i < lambert_.size(); ++i) {
            const double n = static_cast<double>(i + 1);
            un *= u;
            uinvn *= uinv;
            const cplx a = lambert_[i] * un, b = lambert_[i] * uinvn;
            const cplx sn = (a - b) / (2.0 * I);  // c_n sin(2nv)
            const cplx cn = 0.5 * (a + b);        // c_n cos(2nv)
            sum_sin += sn;
            sum_ncos += n * cn;
            sum_n2sin += n * n * sn;
        }
        SeriesValues out;
        out.zeta = eta_a_ / wa_ * z + k * (cot + 4.0 * sum_sin);
        out.wp = -eta_a_ / wa_ + k * k * (csc2 - 8.0 * sum_ncos);
        out.wp_prime = k * k * k * (-2.0 * csc2 * cot + 16.0 * sum_n2sin);
        return out;
    }

    cplx series_log_sigma(cplx z) const
    {
        const cplx k = std::numbers::pi / (2.0 * wa_);
        const cplx v = k * z;
        const cplx u = std::exp(2.0 * I * v);
        const cplx uinv = 1.0 / u;
        cplx val = std::log(std::sin(v) / k) + eta_a_ * z * z / (2.0 * wa_);
        for (const cplx q2n : q2n_) {
            val += std::log(1.0 - q2n * u) + std::log(1.0 - q2n * uinv) - 2.0 * std::log(1.0 - q2n);
        }
        return val;
    }

    static constexpr int kMaxTerms = 80;

    LatticeInvariants inv_;
    LatticeOptions opts_;
    std::vector<double> roots_;
    double omega1_ = 0.0;
    cplx omega3_{};
    double eta1_ = 0.0;
    cplx eta3_{};
    cplx wa_{}, wb_{};
    cplx eta_a_{}, eta_b_{};
    cplx q_{};
    std::vector<cplx> q2n_;
    std::vector<cplx> lambert_;
};

}  // namespace willmore
