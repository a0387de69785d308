#include "etmfd/oracles.hpp"

#include <cmath>

#include "etmfd/error.hpp"

namespace etmfd::oracle {

namespace {

Eigen::MatrixXd series_exp_dense(const Eigen::MatrixXd& m)
{
    // Scale so the norm is below 1/2, sum 30 Taylor terms, square back.
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXd a = m * scale;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// (1/L) \int_{x0}^{x0+L} cos(k x) dx
double cos_average(double k, double x0, double len)
{
    if (k == 0.0) return 1.0;
    return (std::sin(k * (x0 + len)) - std::sin(k * x0)) / (k * len);
}

Eigen::MatrixXd mask_boundary(const RectMesh& mesh, Eigen::MatrixXd m)
{
    for (int e : mesh.boundary_edges()) {
        m.row(e).setZero();
        m.col(e).setZero();
    }
    return m;
}

}  // namespace

Eigen::Matrix2d series_exp(const Eigen::Matrix2d& m)
{
    return series_exp_dense(m);
}

Eigen::Matrix2d simpson_exp_integral(const Eigen::Matrix2d& x, double dt, int panels)
{
    if (panels < 2 || panels % 2 != 0) throw ValidationError("Simpson needs an even panel count");
    const double h = dt / panels;
    Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * series_exp(x * (h * i));
    }
    return sum * (h / 3.0);
}

Eigen::Matrix2d block_exp_integral(const Eigen::Matrix2d& x, double dt)
{
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(4, 4);
    big.topLeftCorner(2, 2) = x * dt;
    big.topRightCorner(2, 2) = Eigen::Matrix2d::Identity() * dt;
    return series_exp_dense(big).topRightCorner(2, 2);
}

Eigen::Matrix2d coupling(const Medium& medium)
{
    Eigen::Matrix2d x;
    x << 0.0, -1.0 / medium.eps0, medium.eps0 * medium.omega_p * medium.omega_p, -medium.omega_i;
    return x;
}

Eigen::Matrix4d local_w(const MfdParams& p, double dx, double dy)
{
    const double a = 4.0 * p.w1;
    const double b = 4.0 * p.w2;
    const double c = 4.0 * p.w3;
    Eigen::Matrix4d w;
    w << 1 + a, b, 1 - a, -b,
         b, 1 + c, -b, 1 - c,
         1 - a, -b, 1 + a, b,
         -b, 1 - c, b, 1 + c;
    return w / (4.0 * dx * dy);
}

Eigen::MatrixXd dense_curl(const RectMesh& mesh)
{
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(mesh.num_faces(), mesh.num_edges());
    const double area = mesh.face_area();
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Eigen::Vector2d center = mesh.face_center(f);
        for (int e : mesh.face_edges(f)) {
            // Counter-clockwise circulation: the edge tangent agrees with the
            // boundary orientation when it points along (center -> midpoint)
            // rotated by +90 degrees. In periodic mode the far edges of a
            // boundary face are stored on the origin side, so unwrap first.
            Eigen::Vector2d out = mesh.edge_midpoint(e) - center;
            if (mesh.mode() == BoundaryMode::Periodic) {
                if (out.x() > 0.5 * mesh.lx()) out.x() -= mesh.lx();
                if (out.x() < -0.5 * mesh.lx()) out.x() += mesh.lx();
                if (out.y() > 0.5 * mesh.ly()) out.y() -= mesh.ly();
                if (out.y() < -0.5 * mesh.ly()) out.y() += mesh.ly();
            }
            const Eigen::Vector2d ccw(-out.y(), out.x());
            const double sign = mesh.edge_tangent(e).dot(ccw) > 0.0 ? 1.0 : -1.0;
            c(f, e) += sign * mesh.edge_length(e) / area;
        }
    }
    return c;
}

Eigen::MatrixXd dense_curl_curl(const RectMesh& mesh)
{
    const Eigen::MatrixXd c = dense_curl(mesh);
    return mask_boundary(mesh, c.transpose() * mesh.face_area() * c);
}

Eigen::MatrixXd dense_W(const RectMesh& mesh, const MfdParams& params)
{
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(mesh.num_edges(), mesh.num_edges());
    const Eigen::Matrix4d local = local_w(params, mesh.dx(), mesh.dy());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const auto edges = mesh.face_edges(f);
        for (int p = 0; p < 4; ++p) {
            for (int q = 0; q < 4; ++q) w(edges[p], edges[q]) += local(p, q);
        }
    }
    return mask_boundary(mesh, w);
}

SimState dense_step(const SimState& s, const RectMesh& mesh, const MfdParams& params,
                    const Medium& medium, double dt)
{
    const Eigen::Matrix2d x = coupling(medium);
    const Eigen::Matrix2d ex = series_exp(x * dt);
    const Eigen::Matrix2d y = block_exp_integral(x, dt);
    const double a1 = ex(0, 0), a2 = ex(0, 1), b2 = ex(1, 0), b1 = ex(1, 1);
    const double a3 = y(0, 0), b3 = y(1, 0);
    const Eigen::MatrixXd wa = dense_W(mesh, params) * dense_curl_curl(mesh);

    SimState next;
    next.step = s.step + 1;
    next.e_prev = s.e_curr;
    next.j_prev = s.j_curr;
    next.e_curr = (1.0 + a1) * s.e_curr + a2 * s.j_curr - a1 * s.e_prev - a2 * s.j_prev -
                  medium.c0 * medium.c0 * dt * a3 * (wa * s.e_curr);
    next.j_curr = b1 * s.j_curr + b2 * s.e_curr +
                  (b3 / a3) * (next.e_curr - a1 * s.e_curr - a2 * s.j_curr);
    return next;
}

Eigen::Matrix<std::complex<double>, 4, 2> bloch_phase(double kx, double ky, double dx, double dy)
{
    using C = std::complex<double>;
    const C i(0.0, 1.0);
    Eigen::Matrix<C, 4, 2> s = Eigen::Matrix<C, 4, 2>::Zero();
    s(0, 0) = std::exp(-i * ky * dy * 0.5);  // bottom
    s(1, 1) = std::exp(i * kx * dx * 0.5);   // right
    s(2, 0) = std::exp(i * ky * dy * 0.5);   // top
    s(3, 1) = std::exp(-i * kx * dx * 0.5);  // left
    return s;
}

Eigen::Matrix2cd bloch_reduce(const Eigen::Matrix4d& local, double kx, double ky, double dx,
                              double dy)
{
    const auto s = bloch_phase(kx, ky, dx, dy);
    return s.adjoint() * local.cast<std::complex<double>>() * s;
}

double bloch_spatial_symbol(const Eigen::Matrix4d& w_local, const Eigen::Matrix4d& a_local,
                            double kx, double ky, double dx, double dy, double c0)
{
    const Eigen::Matrix2cd rw = bloch_reduce(w_local, kx, ky, dx, dy);
    const Eigen::Matrix2cd ra = bloch_reduce(a_local, kx, ky, dx, dy);
    return -c0 * c0 * (rw * ra).trace().real();
}

double bloch_spatial_symbol(double kx, double ky, double dx, double dy, const MfdParams& params,
                            double c0)
{
    Eigen::Vector4d c(dx, dy, -dx, -dy);
    c /= dx * dy;
    const Eigen::Matrix4d a_local = c * c.transpose() * (dx * dy);
    return bloch_spatial_symbol(local_w(params, dx, dy), a_local, kx, ky, dx, dy, c0);
}

Eigen::VectorXcd bloch_wave(const RectMesh& mesh, double kx, double ky, std::complex<double> ref_h,
                            std::complex<double> ref_v)
{
    const std::complex<double> i(0.0, 1.0);
    Eigen::VectorXcd u(mesh.num_edges());
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const Eigen::Vector2d m = mesh.edge_midpoint(e);
        const auto ref = mesh.orientation(e) == EdgeOrientation::Horizontal ? ref_h : ref_v;
        u[e] = ref * std::exp(i * (kx * m.x() + ky * m.y()));
    }
    return u;
}

double standing_wave_edge_average(const RectMesh& mesh, int edge, double kx, double ky)
{
    const Eigen::Vector2d o = mesh.edge_origin(edge);
    const double len = mesh.edge_length(edge);
    if (mesh.orientation(edge) == EdgeOrientation::Horizontal) {
        return -ky * std::sin(ky * o.y()) * cos_average(kx, o.x(), len);
    }
    return kx * std::sin(kx * o.x()) * cos_average(ky, o.y(), len);
}

double cosine_cell_average(const RectMesh& mesh, int face, double kx, double ky)
{
    const Eigen::Vector2d o = mesh.face_origin(face);
    return cos_average(kx, o.x(), mesh.dx()) * cos_average(ky, o.y(), mesh.dy());
}

}  // namespace etmfd::oracle
