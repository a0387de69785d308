#pragma once

// Independent reference implementations used to cross-check the production
// code: series exponentials, brute-force dense assembly, Bloch reductions
// and closed-form interpolation integrals. Nothing here is on a hot path.

#include <Eigen/Core>
#include <complex>

#include "etmfd/operators.hpp"
#include "etmfd/plasma.hpp"
#include "etmfd/stepper.hpp"

namespace etmfd::oracle {

/// exp(m) by scaling and squaring of a truncated Taylor series.
Eigen::Matrix2d series_exp(const Eigen::Matrix2d& m);

/// \int_0^dt exp(x s) ds by composite Simpson on `panels` (even) panels.
Eigen::Matrix2d simpson_exp_integral(const Eigen::Matrix2d& x, double dt, int panels = 2000);

/// \int_0^dt exp(x s) ds as the top-right block of exp([[x dt, I dt], [0, 0]]).
Eigen::Matrix2d block_exp_integral(const Eigen::Matrix2d& x, double dt);

/// X from the medium constants, written out independently.
Eigen::Matrix2d coupling(const Medium& medium);

/// Local W written entry by entry from the family definition.
Eigen::Matrix4d local_w(const MfdParams& params, double dx, double dy);

/// Dense face-by-edge signed curl built from edge geometry.
Eigen::MatrixXd dense_curl(const RectMesh& mesh);

/// Dense C^T |f| C with PEC rows/columns zeroed.
Eigen::MatrixXd dense_curl_curl(const RectMesh& mesh);

/// Dense sum of local W blocks with PEC rows/columns zeroed.
Eigen::MatrixXd dense_W(const RectMesh& mesh, const MfdParams& params);

/// One hybrid step from dense operators and series exponentials.
SimState dense_step(const SimState& state, const RectMesh& mesh, const MfdParams& params,
                    const Medium& medium, double dt);

/// 4x2 Bloch phase matrix S for a face centered at the origin: columns are
/// the horizontal and vertical reference DoF, rows the [b, r, t, l] slots.
Eigen::Matrix<std::complex<double>, 4, 2> bloch_phase(double kx, double ky, double dx, double dy);

/// S^H L S: the 2x2 action of the assembled operator on a plane wave.
Eigen::Matrix2cd bloch_reduce(const Eigen::Matrix4d& local, double kx, double ky, double dx,
                              double dy);

/// -c0^2 trace((S^H W_f S)(S^H A_f S)) for given local blocks.
double bloch_spatial_symbol(const Eigen::Matrix4d& w_local, const Eigen::Matrix4d& a_local,
                            double kx, double ky, double dx, double dy, double c0);

/// Same with the oracle's own local W and curl-curl blocks.
double bloch_spatial_symbol(double kx, double ky, double dx, double dy, const MfdParams& params,
                            double c0);

/// Edge DoF of a discrete plane wave exp(i k . midpoint) times the
/// reference amplitude of the edge's orientation.
Eigen::VectorXcd bloch_wave(const RectMesh& mesh, double kx, double ky,
                            std::complex<double> ref_h, std::complex<double> ref_v);

/// Exact edge average (1/|e|) \int_e phi . tau for
/// phi = (-ky cos(kx x) sin(ky y), kx sin(kx x) cos(ky y)).
double standing_wave_edge_average(const RectMesh& mesh, int edge, double kx, double ky);

/// Exact cell average of cos(kx x) cos(ky y) over face f.
double cosine_cell_average(const RectMesh& mesh, int face, double kx, double ky);

}  // namespace etmfd::oracle
