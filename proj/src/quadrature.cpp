#include "etmfd/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <mutex>
#include <map>

#include "etmfd/error.hpp"

namespace etmfd {

namespace {
constexpr int kMaxGaussPoints = 64;
}

QuadratureRule QuadratureRule::gauss(int n)
{
    if (n < 1 || n > kMaxGaussPoints) {
        throw ValidationError("gauss rule needs 1..64 points, got " + std::to_string(n));
    }
    return {Kind::Gauss, n};
}

GaussLegendre gauss_legendre(int n)
{
    if (n < 1 || n > kMaxGaussPoints) {
        throw ValidationError("gauss rule needs 1..64 points, got " + std::to_string(n));
    }
    static std::mutex cache_mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    // Boost returns the non-negative zeros only, smallest first.
    const auto half = boost::math::legendre_p_zeros<double>(n);
    GaussLegendre rule;
    for (double x : half) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
        if (x != 0.0) {
            rule.nodes.push_back(-x);
            rule.weights.push_back(w);
        }
    }
    std::vector<std::size_t> order(rule.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    GaussLegendre sorted;
    for (auto i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return cache.emplace(n, std::move(sorted)).first->second;
}

GaussLegendre nodes_for(const QuadratureRule& rule)
{
    if (rule.kind == QuadratureRule::Kind::Midpoint) return {{0.0}, {2.0}};
    return gauss_legendre(rule.points);
}

}  // namespace etmfd
