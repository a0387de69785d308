#pragma once

#include <vector>

namespace etmfd {

/// Edge/cell averaging rule used by the interpolation operators.
struct QuadratureRule {
    enum class Kind { Midpoint, Gauss };

    Kind kind = Kind::Midpoint;
    int points = 1;

    static QuadratureRule midpoint() { return {Kind::Midpoint, 1}; }
    static QuadratureRule gauss(int n);

    bool operator==(const QuadratureRule&) const = default;
};

/// Nodes and weights on [-1, 1]; the weights sum to 2.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (exact for polynomials of degree 2n-1).
/// Midpoint is the n = 1 rule.
GaussLegendre gauss_legendre(int n);

/// Nodes/weights for a QuadratureRule.
GaussLegendre nodes_for(const QuadratureRule& rule);

}  // namespace etmfd
