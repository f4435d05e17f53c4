#pragma once

#include "grid.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace ssforge {

/// Triangle mesh with per-vertex normals, built from the unmasked part of a
/// grid.  Vertex order is row-major over the grid; cells with any masked
/// corner are dropped.
struct Mesh {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

inline Mesh build_mesh(const SurfaceGrid& grid) {
    const int nu = grid.domain.nu;
    Mesh mesh;
    std::vector<std::int64_t> remap(grid.z.size(), -1);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nu; ++j) {
            const std::size_t k = grid.index(i, j);
            if (grid.status[k] != PointStatus::Regular) continue;
            remap[k] = static_cast<std::int64_t>(mesh.positions.size());
            mesh.positions.push_back(grid.evals[k].X);
            mesh.normals.push_back(grid.evals[k].N);
        }
    }
    const bool wrap = grid.domain.periodic_u2();
    const int jmax = wrap ? nu : nu - 1;
    for (int i = 0; i + 1 < nu; ++i) {
        for (int j = 0; j < jmax; ++j) {
            const int jn = (j + 1) % nu;
            const std::int64_t a = remap[grid.index(i, j)];
            const std::int64_t b = remap[grid.index(i + 1, j)];
            const std::int64_t c = remap[grid.index(i + 1, jn)];
            const std::int64_t d = remap[grid.index(i, jn)];
            if (a < 0 || b < 0 || c < 0 || d < 0) continue;
            mesh.triangles.push_back({static_cast<std::uint32_t>(a),
                                      static_cast<std::uint32_t>(b),
                                      static_cast<std::uint32_t>(c)});
            mesh.triangles.push_back({static_cast<std::uint32_t>(a),
                                      static_cast<std::uint32_t>(c),
                                      static_cast<std::uint32_t>(d)});
        }
    }
    return mesh;
}

namespace detail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

inline bool write_obj(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) return false;
    for (std::size_t k = 0; k < mesh.positions.size(); ++k) {
        const Vec3& p = mesh.positions[k];
        out << "v " << detail::fmt(p.x) << ' ' << detail::fmt(p.y) << ' '
            << detail::fmt(p.z) << '\n';
    }
    for (const Vec3& n : mesh.normals)
        out << "vn " << detail::fmt(n.x) << ' ' << detail::fmt(n.y) << ' '
            << detail::fmt(n.z) << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << "//" << t[0] + 1 << ' ' << t[1] + 1 << "//"
            << t[1] + 1 << ' ' << t[2] + 1 << "//" << t[2] + 1 << '\n';
    return bool(out);
}

/// Binary little-endian PLY with float positions and normals.
inline bool write_ply(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << mesh.positions.size() << '\n'
        << "property float x\nproperty float y\nproperty float z\n"
        << "property float nx\nproperty float ny\nproperty float nz\n"
        << "element face " << mesh.triangles.size() << '\n'
        << "property list uchar uint vertex_indices\nend_header\n";
    auto put_float = [&](double v) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), sizeof(f));
    };
    for (std::size_t k = 0; k < mesh.positions.size(); ++k) {
        put_float(mesh.positions[k].x);
        put_float(mesh.positions[k].y);
        put_float(mesh.positions[k].z);
        put_float(mesh.normals[k].x);
        put_float(mesh.normals[k].y);
        put_float(mesh.normals[k].z);
    }
    for (const auto& t : mesh.triangles) {
        const std::uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        out.write(reinterpret_cast<const char*>(t.data()), 3 * sizeof(std::uint32_t));
    }
    return bool(out);
}

inline constexpr const char* kCsvHeader =
    "u1,u2,x,y,z,nx,ny,nz,H,K,psi,lambda,ss_residual,midsphere_residual,trV,detV,masked";

/// One row per grid point, 17 columns, UTF-8, LF, '.' decimal.  Masked rows
/// keep their parameter columns and zero geometry.
inline bool write_csv(const SurfaceGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << kCsvHeader << '\n';
    for (std::size_t k = 0; k < grid.z.size(); ++k) {
        const bool masked = grid.status[k] != PointStatus::Regular;
        const SurfaceEval s = masked ? SurfaceEval{} : grid.evals[k];
        const double cols[16] = {grid.z[k].real(), grid.z[k].imag(),
                                 s.X.x, s.X.y, s.X.z, s.N.x, s.N.y, s.N.z,
                                 s.H, s.K, s.psi, s.lambda,
                                 s.ss_residual, s.midsphere_residual,
                                 s.trV, s.detV};
        for (double c : cols) out << detail::fmt(c) << ',';
        out << (masked ? 1 : 0) << '\n';
    }
    return bool(out);
}

} // namespace ssforge
