#pragma once

// Small polynomial helpers shared by the lattice builder and the parameter
// algebra. Coefficients are stored in ascending order: c[0] + c[1] x + ...

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

namespace willmore::poly {

using cplx = std::complex<double>;

/// Roots closer than this (relative to 1 + |root|) are one multiple root.
inline constexpr double kMultiplicityTol = 1e-7;

template <typename T>
[[nodiscard]] T evaluate(std::span<const double> c, T x)
{
    T acc{0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

template <typename T>
[[nodiscard]] T evaluate_derivative(std::span<const double> c, T x)
{
    T acc{0};
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
    return acc;
}

struct Root {
    cplx value;
    int multiplicity = 1;
};

/// All complex roots, grouped into clusters of multiple roots. Simple roots are
/// Newton-polished; clusters are replaced by their centroid, which is far more
/// accurate than any single member.
[[nodiscard]] inline std::vector<Root> roots(std::span<const double> c)
{
    std::size_t deg = c.size();
    while (deg > 0 && c[deg - 1] == 0.0) --deg;
    std::vector<Root> out;
    if (deg <= 1) return out;

    std::vector<cplx> raw;
    const bool all_zero_tail = std::all_of(c.begin(), c.begin() + static_cast<long>(deg) - 1,
                                           [](double v) { return v == 0.0; });
    if (all_zero_tail) {
        raw.assign(deg - 1, cplx{0.0, 0.0});
    } else {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(deg));
        for (std::size_t k = 0; k < deg; ++k) coeffs[static_cast<Eigen::Index>(k)] = c[k];
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        for (const auto& r : solver.roots()) raw.push_back(r);
    }

    const std::span<const double> p(c.data(), deg);
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        cplx sum = raw[i];
        int count = 1;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(raw[j] - raw[i]) <= kMultiplicityTol * (1.0 + std::abs(raw[i]))) {
                used[j] = true;
                sum += raw[j];
                ++count;
            }
        }
        cplx r = sum / static_cast<double>(count);
        if (count == 1) {
            for (int it = 0; it < 8; ++it) {
                const cplx f = evaluate<cplx>(p, r);
                const cplx df = evaluate_derivative<cplx>(p, r);
                if (df == cplx{0.0, 0.0}) break;
                const cplx step = f / df;
                r -= step;
                if (std::abs(step) <= 1e-16 * (1.0 + std::abs(r))) break;
            }
        }
        if (std::abs(r.imag()) <= kMultiplicityTol * (1.0 + std::abs(r))) r.imag(0.0);
        out.push_back({r, count});
    }
    return out;
}

/// Sorted real roots, each repeated according to its multiplicity.
[[nodiscard]] inline std::vector<double> real_roots(std::span<const double> c)
{
    std::vector<double> out;
    for (const auto& r : roots(c)) {
        if (r.value.imag() != 0.0) continue;
        out.insert(out.end(), static_cast<std::size_t>(r.multiplicity), r.value.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

[[nodiscard]] inline bool has_multiple_root(std::span<const double> c)
{
    const auto rs = roots(c);
    return std::any_of(rs.begin(), rs.end(), [](const Root& r) { return r.multiplicity > 1; });
}

}  // namespace willmore::poly
