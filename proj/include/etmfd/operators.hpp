#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "etmfd/mesh.hpp"

namespace etmfd {

/// Free parameters of the lowest-order edge MFD family on rectangles.
struct MfdParams {
    double w1 = 0.25;
    double w2 = 0.0;
    double w3 = 0.25;

    bool operator==(const MfdParams&) const = default;
};

/// (1/4, 0, 1/4): the local W becomes (1/(2 dx dy)) I, i.e. the Yee stencil.
MfdParams yee_params();

/// Dispersion-optimal member for Courant number nu and aspect ratio gamma:
/// w2 = -nu^2/(12 gamma), w1 = w2/gamma + 1/3, w3 = w2 gamma + 1/3.
MfdParams optimal_params(double nu, double gamma);

struct CourantSpec {
    double nu;    ///< c0 dt / dx
    double nu_x;  ///< c0 dt / dx
    double nu_y;  ///< c0 dt / dy

    static CourantSpec from_step(const RectMesh& mesh, double c0, double dt);
};

using LocalVector = Eigen::Vector4d;
using LocalMatrix = Eigen::Matrix4d;

/// Local curl in [bottom, right, top, left] order:
/// (1/(dx dy)) (dx, dy, -dx, -dy).
LocalVector local_curl(double dx, double dy);

/// Parameterized approximate inverse of the local edge mass matrix.
LocalMatrix local_W(const MfdParams& params, double dx, double dy);

/// The optimal local W written directly in Courant numbers.
LocalMatrix optimal_local_W(double nu_x, double nu_y, double dx, double dy);

/// Exact inverse of local_W; used for norms only.
/// Throws SingularMatrixError when local_W is singular (pivot below 1e-12
/// relative to the max-norm).
LocalMatrix local_M(const MfdParams& params, double dx, double dy);

/// (local_curl)^T |f| (local_curl).
LocalMatrix local_curl_curl(double dx, double dy);

/// Row-major sparse operator over edge (or face) DoF.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    SparseOperator() = default;
    explicit SparseOperator(Matrix matrix) : matrix_(std::move(matrix)) {}

    Eigen::Index rows() const { return matrix_.rows(); }
    Eigen::Index cols() const { return matrix_.cols(); }
    Eigen::Index nonzeros() const { return matrix_.nonZeros(); }
    const Matrix& matrix() const noexcept { return matrix_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(matrix_); }
    bool is_symmetric(double tol = 0.0) const;

    /// this * other
    SparseOperator compose(const SparseOperator& other) const;
    SparseOperator scaled(double factor) const;

private:
    Matrix matrix_;
};

/// Matrix-vector product.
EdgeField apply(const SparseOperator& op, const EdgeField& f);

/// Assemble sum_f P_f^T local P_f over all faces, then zero the rows and
/// columns of PEC boundary edges.
SparseOperator assemble_edge_operator(const RectMesh& mesh, const LocalMatrix& local);

/// A_h = curl_h^T M_F curl_h.
SparseOperator assemble_curl_curl(const RectMesh& mesh);

/// Global W_E.
SparseOperator assemble_W(const RectMesh& mesh, const MfdParams& params);

enum class NormMatrix {
    Assembled,  ///< sum of local_M blocks
    Lumped,     ///< row-sum diagonal of the assembled matrix
};

/// Global M_E for error norms.
SparseOperator assemble_M(const RectMesh& mesh, const MfdParams& params,
                          NormMatrix kind = NormMatrix::Assembled);

/// Face-by-edge discrete curl (one row of local_curl per face). Boundary
/// columns are not constrained.
SparseOperator assemble_discrete_curl(const RectMesh& mesh);

}  // namespace etmfd
