#include "etmfd/mesh.hpp"

#include <cmath>

#include "etmfd/error.hpp"

namespace etmfd {

std::string to_string(BoundaryMode mode)
{
    return mode == BoundaryMode::PEC ? "pec" : "periodic";
}

BoundaryMode boundary_mode_from_string(const std::string& name)
{
    if (name == "pec" || name == "PEC") return BoundaryMode::PEC;
    if (name == "periodic") return BoundaryMode::Periodic;
    throw ValidationError("unknown boundary mode '" + name + "' (expected pec|periodic)");
}

RectMesh::RectMesh(int nx, int ny, double lx, double ly, BoundaryMode mode)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), mode_(mode)
{
    if (nx < 1 || ny < 1) {
        throw ValidationError("mesh needs nx, ny >= 1 (got " + std::to_string(nx) + ", " +
                              std::to_string(ny) + ")");
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw ValidationError("mesh extents must be positive and finite");
    }
    dx_ = lx / nx;
    dy_ = ly / ny;
    if (mode == BoundaryMode::PEC) {
        num_h_ = nx * (ny + 1);
        num_v_ = (nx + 1) * ny;
    } else {
        num_h_ = nx * ny;
        num_v_ = nx * ny;
    }

    boundary_.assign(static_cast<std::size_t>(num_edges()), 0);
    if (mode == BoundaryMode::PEC) {
        for (int i = 0; i < nx; ++i) {
            boundary_[horizontal_edge(i, 0)] = 1;
            boundary_[horizontal_edge(i, ny)] = 1;
        }
        for (int j = 0; j < ny; ++j) {
            boundary_[vertical_edge(0, j)] = 1;
            boundary_[vertical_edge(nx, j)] = 1;
        }
    }
    interior_mask_ = Eigen::VectorXd::Ones(num_edges());
    for (int e = 0; e < num_edges(); ++e) {
        if (boundary_[e]) {
            boundary_list_.push_back(e);
            interior_mask_[e] = 0.0;
        }
    }
}

int RectMesh::horizontal_edge(int i, int j) const
{
    if (mode_ == BoundaryMode::Periodic) {
        i = ((i % nx_) + nx_) % nx_;
        j = ((j % ny_) + ny_) % ny_;
    } else if (i < 0 || i >= nx_ || j < 0 || j > ny_) {
        throw ValidationError("horizontal edge index out of range");
    }
    return j * nx_ + i;
}

int RectMesh::vertical_edge(int i, int j) const
{
    if (mode_ == BoundaryMode::Periodic) {
        i = ((i % nx_) + nx_) % nx_;
        j = ((j % ny_) + ny_) % ny_;
        return num_h_ + j * nx_ + i;
    }
    if (i < 0 || i > nx_ || j < 0 || j >= ny_) {
        throw ValidationError("vertical edge index out of range");
    }
    return num_h_ + j * (nx_ + 1) + i;
}

int RectMesh::face(int i, int j) const
{
    if (i < 0 || i >= nx_ || j < 0 || j >= ny_) throw ValidationError("face index out of range");
    return j * nx_ + i;
}

std::array<int, 4> RectMesh::face_edges(int f) const
{
    const int i = f % nx_;
    const int j = f / nx_;
    return {horizontal_edge(i, j), vertical_edge(i + 1, j), horizontal_edge(i, j + 1),
            vertical_edge(i, j)};
}

EdgeOrientation RectMesh::orientation(int e) const
{
    return e < num_h_ ? EdgeOrientation::Horizontal : EdgeOrientation::Vertical;
}

Eigen::Vector2d RectMesh::edge_origin(int e) const
{
    if (e < num_h_) {
        const int i = e % nx_;
        const int j = e / nx_;
        return {i * dx_, j * dy_};
    }
    const int local = e - num_h_;
    const int stride = mode_ == BoundaryMode::PEC ? nx_ + 1 : nx_;
    return {(local % stride) * dx_, (local / stride) * dy_};
}

Eigen::Vector2d RectMesh::edge_midpoint(int e) const
{
    return edge_origin(e) + 0.5 * edge_length(e) * edge_tangent(e);
}

Eigen::Vector2d RectMesh::edge_tangent(int e) const
{
    return e < num_h_ ? Eigen::Vector2d(1.0, 0.0) : Eigen::Vector2d(0.0, 1.0);
}

double RectMesh::edge_length(int e) const { return e < num_h_ ? dx_ : dy_; }

Eigen::Vector2d RectMesh::face_origin(int f) const
{
    return {(f % nx_) * dx_, (f / nx_) * dy_};
}

Eigen::Vector2d RectMesh::face_center(int f) const
{
    return face_origin(f) + Eigen::Vector2d(0.5 * dx_, 0.5 * dy_);
}

void RectMesh::apply_pec(EdgeField& field) const
{
    for (int e : boundary_list_) field[e] = 0.0;
}

EdgeField interpolate_edge_field(const RectMesh& mesh, const VectorFunction& field,
                                 const QuadratureRule& rule)
{
    const auto q = nodes_for(rule);
    EdgeField dofs(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Eigen::Vector2d origin = mesh.edge_origin(e);
        const Eigen::Vector2d tau = mesh.edge_tangent(e);
        const double len = mesh.edge_length(e);
        double sum = 0.0;
        for (std::size_t p = 0; p < q.nodes.size(); ++p) {
            const Eigen::Vector2d x = origin + (0.5 * (q.nodes[p] + 1.0) * len) * tau;
            sum += 0.5 * q.weights[p] * tau.dot(field(x.x(), x.y()));
        }
        dofs[e] = sum;
    }
    return dofs;
}

FaceField interpolate_face_field(const RectMesh& mesh, const ScalarFunction& g,
                                 const QuadratureRule& rule)
{
    const auto q = nodes_for(rule);
    FaceField dofs(mesh.num_faces());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Eigen::Vector2d origin = mesh.face_origin(f);
        double sum = 0.0;
        for (std::size_t a = 0; a < q.nodes.size(); ++a) {
            const double x = origin.x() + 0.5 * (q.nodes[a] + 1.0) * mesh.dx();
            for (std::size_t b = 0; b < q.nodes.size(); ++b) {
                const double y = origin.y() + 0.5 * (q.nodes[b] + 1.0) * mesh.dy();
                sum += 0.25 * q.weights[a] * q.weights[b] * g(x, y);
            }
        }
        dofs[f] = sum;
    }
    return dofs;
}

}  // namespace etmfd
