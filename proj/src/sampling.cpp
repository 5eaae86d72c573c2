#include "geoweb/sampling.hpp"

#include "geoweb/error.hpp"

#include <cmath>
#include <random>

namespace geoweb {

std::vector<std::vector<double>> grid_points(const Domain& domain, int k)
{
    if (k < 1) throw SchemaError("grid size must be at least 1");
    const auto n = domain.center.size();
    const double half = domain.radius / std::sqrt(static_cast<double>(n));

    std::size_t total = 1;
    for (std::size_t c = 0; c < n; ++c) total *= static_cast<std::size_t>(k);

    std::vector<std::vector<double>> pts;
    pts.reserve(total);
    std::vector<int> idx(n, 0);
    for (std::size_t p = 0; p < total; ++p) {
        std::vector<double> x(n);
        for (std::size_t c = 0; c < n; ++c) {
            const double u = k == 1 ? 0.0 : -1.0 + 2.0 * idx[c] / (k - 1);
            x[c] = domain.center[c] + half * u;
        }
        pts.push_back(std::move(x));
        // last coordinate varies fastest
        for (std::size_t c = n; c-- > 0;) {
            if (++idx[c] < k) break;
            idx[c] = 0;
        }
    }
    return pts;
}

std::vector<std::vector<double>> random_points(const Domain& domain, std::size_t count, std::uint64_t seed)
{
    const auto n = domain.center.size();
    std::mt19937_64 rng(seed);
    // explicit 53-bit mapping: std::uniform_real_distribution is not portable across standard libraries
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

    std::vector<std::vector<double>> pts;
    pts.reserve(count);
    std::vector<double> u(n);
    while (pts.size() < count) {
        double r2 = 0.0;
        for (auto& v : u) {
            v = uniform();
            r2 += v * v;
        }
        if (r2 >= 1.0) continue;
        std::vector<double> x(n);
        for (std::size_t c = 0; c < n; ++c) x[c] = domain.center[c] + domain.radius * u[c];
        pts.push_back(std::move(x));
    }
    return pts;
}

} // namespace geoweb
