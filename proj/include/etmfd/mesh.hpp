#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "etmfd/quadrature.hpp"

namespace etmfd {

/// One real DoF per edge: the average tangential component along the edge,
/// with tangent +x on horizontal edges and +y on vertical edges.
using EdgeField = Eigen::VectorXd;

/// One real DoF per face: the cell average of a scalar field.
using FaceField = Eigen::VectorXd;

using VectorFunction = std::function<Eigen::Vector2d(double x, double y)>;
using ScalarFunction = std::function<double(double x, double y)>;

enum class BoundaryMode { PEC, Periodic };

enum class EdgeOrientation { Horizontal, Vertical };

std::string to_string(BoundaryMode mode);
BoundaryMode boundary_mode_from_string(const std::string& name);

/// Local edge slots of a face. The order fixes the sign pattern of the
/// local curl and the Bloch phases used in the dispersion analysis.
enum FaceSlot : int { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

/// Structured rectangular mesh on [0, Lx] x [0, Ly].
///
/// Horizontal edge (i, j) runs from (i dx, j dy) to ((i+1) dx, j dy) and
/// vertical edge (i, j) from (i dx, j dy) to (i dx, (j+1) dy). Horizontal
/// edges are numbered first (row-major in j), then vertical edges. In
/// periodic mode the edges on x = Lx and y = Ly are identified with those on
/// x = 0 and y = 0, so there are nx*ny of each kind and no boundary edges.
class RectMesh {
public:
    RectMesh(int nx, int ny, double lx, double ly, BoundaryMode mode = BoundaryMode::PEC);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }
    /// Aspect ratio dy/dx.
    double gamma() const noexcept { return dy_ / dx_; }
    BoundaryMode mode() const noexcept { return mode_; }
    double face_area() const noexcept { return dx_ * dy_; }

    int num_horizontal_edges() const noexcept { return num_h_; }
    int num_vertical_edges() const noexcept { return num_v_; }
    int num_edges() const noexcept { return num_h_ + num_v_; }
    int num_faces() const noexcept { return nx_ * ny_; }

    int horizontal_edge(int i, int j) const;
    int vertical_edge(int i, int j) const;
    int face(int i, int j) const;

    /// Edges of face f in [bottom, right, top, left] order.
    std::array<int, 4> face_edges(int f) const;

    EdgeOrientation orientation(int e) const;
    /// Start point of the edge; the edge extends along its tangent.
    Eigen::Vector2d edge_origin(int e) const;
    Eigen::Vector2d edge_midpoint(int e) const;
    Eigen::Vector2d edge_tangent(int e) const;
    double edge_length(int e) const;
    /// Lower-left corner of face f.
    Eigen::Vector2d face_origin(int f) const;
    Eigen::Vector2d face_center(int f) const;

    bool is_boundary_edge(int e) const { return boundary_[static_cast<std::size_t>(e)] != 0; }
    const std::vector<int>& boundary_edges() const noexcept { return boundary_list_; }
    /// 1 on interior (unconstrained) edges, 0 on PEC boundary edges.
    const Eigen::VectorXd& interior_mask() const noexcept { return interior_mask_; }

    /// Zero the boundary entries in place (no-op in periodic mode).
    void apply_pec(EdgeField& field) const;

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
    double dx_;
    double dy_;
    BoundaryMode mode_;
    int num_h_;
    int num_v_;
    std::vector<char> boundary_;
    std::vector<int> boundary_list_;
    Eigen::VectorXd interior_mask_;
};

/// Edge DoF (1/|e|) \int_e F . tau_e. With the midpoint rule this is
/// tau_e . F(edge midpoint).
EdgeField interpolate_edge_field(const RectMesh& mesh, const VectorFunction& field,
                                 const QuadratureRule& rule = QuadratureRule::midpoint());

/// Cell averages (1/|f|) \int_f g using a tensor-product rule.
FaceField interpolate_face_field(const RectMesh& mesh, const ScalarFunction& g,
                                 const QuadratureRule& rule = QuadratureRule::midpoint());

}  // namespace etmfd
