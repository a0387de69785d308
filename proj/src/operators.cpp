#include "etmfd/operators.hpp"

#include <Eigen/LU>
#include <vector>

#include "etmfd/error.hpp"

namespace etmfd {

MfdParams yee_params() { return {0.25, 0.0, 0.25}; }

MfdParams optimal_params(double nu, double gamma)
{
    if (!(nu >= 0.0)) throw ValidationError("Courant number must be non-negative");
    if (!(gamma > 0.0)) throw ValidationError("aspect ratio must be positive");
    const double w2 = -nu * nu / (12.0 * gamma);
    return {(3.0 * w2 / gamma + 1.0) / 3.0, w2, (3.0 * w2 * gamma + 1.0) / 3.0};
}

CourantSpec CourantSpec::from_step(const RectMesh& mesh, double c0, double dt)
{
    const double nu_x = c0 * dt / mesh.dx();
    return {nu_x, nu_x, c0 * dt / mesh.dy()};
}

LocalVector local_curl(double dx, double dy)
{
    return LocalVector(dx, dy, -dx, -dy) / (dx * dy);
}

LocalMatrix local_W(const MfdParams& p, double dx, double dy)
{
    const double a = 4.0 * p.w1;
    const double b = 4.0 * p.w2;
    const double c = 4.0 * p.w3;
    LocalMatrix w;
    // clang-format off
    w << 1 + a,     b, 1 - a,    -b,
             b, 1 + c,    -b, 1 - c,
         1 - a,    -b, 1 + a,     b,
            -b, 1 - c,     b, 1 + c;
    // clang-format on
    return w / (4.0 * dx * dy);
}

LocalMatrix optimal_local_W(double nu_x, double nu_y, double dx, double dy)
{
    const double xx = nu_x * nu_x;
    const double yy = nu_y * nu_y;
    const double xy = nu_x * nu_y;
    LocalMatrix w;
    // clang-format off
    w << 7 - yy,    -xy, yy - 1,     xy,
            -xy, 7 - xx,     xy, xx - 1,
         yy - 1,     xy, 7 - yy,    -xy,
             xy, xx - 1,    -xy, 7 - xx;
    // clang-format on
    return w / (12.0 * dx * dy);
}

LocalMatrix local_M(const MfdParams& params, double dx, double dy)
{
    const LocalMatrix w = local_W(params, dx, dy);
    Eigen::FullPivLU<LocalMatrix> lu(w);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("local W is singular for (w1, w2, w3) = (" +
                                  std::to_string(params.w1) + ", " + std::to_string(params.w2) +
                                  ", " + std::to_string(params.w3) + ")");
    }
    return lu.inverse();
}

LocalMatrix local_curl_curl(double dx, double dy)
{
    const LocalVector c = local_curl(dx, dy);
    return c * (dx * dy) * c.transpose();
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& x) const
{
    if (x.size() != matrix_.cols()) {
        throw ValidationError("operator/field size mismatch");
    }
    return matrix_ * x;
}

bool SparseOperator::is_symmetric(double tol) const
{
    if (rows() != cols()) return false;
    const Matrix t = matrix_.transpose();
    return (matrix_ - t).norm() <= tol;
}

SparseOperator SparseOperator::compose(const SparseOperator& other) const
{
    if (cols() != other.rows()) throw ValidationError("operator composition size mismatch");
    Matrix product = (matrix_ * other.matrix_).pruned();
    return SparseOperator(std::move(product));
}

SparseOperator SparseOperator::scaled(double factor) const
{
    return SparseOperator(Matrix(factor * matrix_));
}

EdgeField apply(const SparseOperator& op, const EdgeField& f) { return op.apply(f); }

SparseOperator assemble_edge_operator(const RectMesh& mesh, const LocalMatrix& local)
{
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(16 * mesh.num_faces()));
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const auto edges = mesh.face_edges(f);
        for (int p = 0; p < 4; ++p) {
            if (mesh.is_boundary_edge(edges[p])) continue;
            for (int q = 0; q < 4; ++q) {
                if (mesh.is_boundary_edge(edges[q])) continue;
                // Zero entries from e.g. w2 = 0 are kept out of the pattern.
                if (local(p, q) != 0.0) triplets.emplace_back(edges[p], edges[q], local(p, q));
            }
        }
    }
    SparseOperator::Matrix m(mesh.num_edges(), mesh.num_edges());
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(0.0);
    return SparseOperator(std::move(m));
}

SparseOperator assemble_curl_curl(const RectMesh& mesh)
{
    return assemble_edge_operator(mesh, local_curl_curl(mesh.dx(), mesh.dy()));
}

SparseOperator assemble_W(const RectMesh& mesh, const MfdParams& params)
{
    return assemble_edge_operator(mesh, local_W(params, mesh.dx(), mesh.dy()));
}

SparseOperator assemble_M(const RectMesh& mesh, const MfdParams& params, NormMatrix kind)
{
    auto m = assemble_edge_operator(mesh, local_M(params, mesh.dx(), mesh.dy()));
    if (kind == NormMatrix::Assembled) return m;
    const Eigen::VectorXd row_sums = m.matrix() * Eigen::VectorXd::Ones(m.cols());
    SparseOperator::Matrix d(m.rows(), m.cols());
    std::vector<Eigen::Triplet<double>> triplets;
    for (Eigen::Index i = 0; i < row_sums.size(); ++i) {
        if (row_sums[i] != 0.0) triplets.emplace_back(i, i, row_sums[i]);
    }
    d.setFromTriplets(triplets.begin(), triplets.end());
    return SparseOperator(std::move(d));
}

SparseOperator assemble_discrete_curl(const RectMesh& mesh)
{
    const LocalVector c = local_curl(mesh.dx(), mesh.dy());
    std::vector<Eigen::Triplet<double>> triplets;
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const auto edges = mesh.face_edges(f);
        for (int p = 0; p < 4; ++p) triplets.emplace_back(f, edges[p], c[p]);
    }
    SparseOperator::Matrix m(mesh.num_faces(), mesh.num_edges());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return SparseOperator(std::move(m));
}

}  // namespace etmfd
