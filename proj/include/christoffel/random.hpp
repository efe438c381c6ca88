#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "christoffel/chart.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

class TransformContext;

/// Seeded generator behind every random metric, map and derivative array.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Doubles are formed as (next() >> 11) * 2^-53, so results do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

/// c0 + sum_k c_k x_k + sum_{k<=l} c_kl x_k x_l with coefficients uniform in
/// [-scale, scale].
NodePtr random_quadratic(std::size_t n, Rng& rng, double scale = 1.0);

/// g = A^T A + 0.5 I with every entry of A a random quadratic; symmetric
/// positive definite everywhere.
MetricField random_spd_metric(std::size_t n, Rng& rng);

/// Uniform in [-half_width, half_width]^n.
Point random_point(std::size_t n, Rng& rng, double half_width = 0.5);

/// y = x + 0.1 q(x) with q random quadratics. The inverse is 12 fixed-point
/// iterations x <- y - 0.1 q(x) starting from x = y, built by composition.
CoordinateMap random_near_identity_map(std::size_t n, Rng& rng);

/// Draws near-identity maps and base points until one round-trips to 1e-9
/// and passes the Jacobian checks. `discarded`, if given, counts rejections.
TransformContext random_near_identity_context(std::size_t n, Rng& rng, std::size_t* discarded = nullptr);

}  // namespace christoffel
