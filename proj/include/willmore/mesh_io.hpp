#pragma once

// Plain-text exports: Wavefront OBJ for meshes, CSV for curve samples.
// Numbers are written with %.17g so that files round-trip and are
// byte-identical across runs.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "willmore/geometry.hpp"

namespace willmore {

using Provenance = std::vector<std::pair<std::string, std::string>>;

[[nodiscard]] inline std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[nodiscard]] inline std::string fmt_complex(cplx v)
{
    return fmt_double(v.real()) + (std::signbit(v.imag()) ? " - " : " + ") +
           fmt_double(std::abs(v.imag())) + "i";
}

inline void write_comment_block(std::ostream& os, const Provenance& prov)
{
    for (const auto& [k, v] : prov) os << "# " << k << " = " << v << '\n';
}

inline void write_obj(std::ostream& os, const TorusMesh& mesh, const Provenance& prov = {})
{
    write_comment_block(os, prov);
    os << "# kind = " << to_string(mesh.kind) << '\n';
    os << "# resolution = " << mesh.n_profile << 'x' << mesh.n_fiber << '\n';
    for (const auto& v : mesh.vertices)
        os << "v " << fmt_double(v[0]) << ' ' << fmt_double(v[1]) << ' ' << fmt_double(v[2]) << '\n';
    for (const auto& f : mesh.faces)
        os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << ' ' << f[3] + 1 << '\n';
}

inline void write_samples_csv(std::ostream& os, const std::vector<CurveSample>& samples, const Provenance& prov = {})
{
    write_comment_block(os, prov);
    os << "x,re,im,kappa\n";
    for (const auto& s : samples)
        os << fmt_double(s.x) << ',' << fmt_double(s.point.real()) << ',' << fmt_double(s.point.imag()) << ','
           << fmt_double(s.kappa) << '\n';
}

}  // namespace willmore
