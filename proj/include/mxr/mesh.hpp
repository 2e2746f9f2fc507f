#pragma once

// OBJ mesh export of sampled immersions. Each grid node maps to one vertex
// per the chosen 3-space model; faces are quads in row-major order.

#include <fstream>
#include <string>
#include <vector>

#include "mxr/grid.hpp"

namespace mxr {

enum class MeshModel { Embed4DDropCoordinate, Stereographic, PoincareDisk };

inline const char* mesh_model_name(MeshModel m) {
    switch (m) {
        case MeshModel::Embed4DDropCoordinate: return "embed4d-drop-coordinate";
        case MeshModel::Stereographic: return "stereographic";
        case MeshModel::PoincareDisk: return "poincare-disk";
    }
    return "?";
}

inline MeshModel parse_mesh_model(const std::string& tag) {
    if (tag == "embed4d-drop-coordinate") return MeshModel::Embed4DDropCoordinate;
    if (tag == "stereographic") return MeshModel::Stereographic;
    if (tag == "poincare-disk") return MeshModel::PoincareDisk;
    throw ValidationError("unknown mesh model tag '" + tag + "'");
}

/// Map one ambient node (x^0, ..., x^{n+1}) to 3-space.
inline Eigen::Vector3d mesh_vertex(const Vec& x, const Signature& sig, MeshModel model) {
    const int d = sig.dim();
    const double h = x(d - 1);
    switch (model) {
        case MeshModel::Embed4DDropCoordinate:
            // drop x^2; keeps the vertical coordinate
            return {x(0), x(1), h};
        case MeshModel::Stereographic: {
            if (sig.kappa != 1)
                throw ValidationError("mesh model 'stereographic' requires kappa = +1");
            const double w = 1.0 + x(0);
            if (std::abs(w) < 1e-12)
                throw DomainError("stereographic projection pole hit (x^0 = -1)");
            return {x(1) / w, x(2) / w, h};
        }
        case MeshModel::PoincareDisk: {
            if (sig.kappa != -1)
                throw ValidationError("mesh model 'poincare-disk' requires kappa = -1");
            const double w = 1.0 + x(0);
            return {x(1) / w, x(2) / w, h};
        }
    }
    throw ValidationError("mesh_vertex: bad model tag");
}

inline void write_mesh_obj(const std::vector<Vec>& nodes, const ParameterGrid& grid,
                           const Signature& sig, MeshModel model, const std::string& path) {
    if (static_cast<int>(nodes.size()) != grid.size())
        throw ValidationError("write_mesh_obj: node count does not match the grid");
    std::ofstream out(path);
    if (!out) throw ValidationError("write_mesh_obj: cannot open " + path);
    out << "# " << mesh_model_name(model) << " projection, " << grid.nu << "x" << grid.nv
        << " grid\n";
    out.precision(9);
    for (const Vec& x : nodes) {
        const Eigen::Vector3d v = mesh_vertex(x, sig, model);
        out << "v " << v(0) << " " << v(1) << " " << v(2) << "\n";
    }
    for (int i = 0; i + 1 < grid.nu; ++i)
        for (int j = 0; j + 1 < grid.nv; ++j) {
            const int a = grid.index(i, j) + 1;  // OBJ is 1-indexed
            const int b = grid.index(i + 1, j) + 1;
            const int c = grid.index(i + 1, j + 1) + 1;
            const int e = grid.index(i, j + 1) + 1;
            out << "f " << a << " " << b << " " << c << " " << e << "\n";
        }
    if (!out) throw ValidationError("write_mesh_obj: write failed for " + path);
}

}  // namespace mxr
