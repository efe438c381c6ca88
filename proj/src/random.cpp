#include "christoffel/random.hpp"

#include <string>

#include "christoffel/error.hpp"
#include "christoffel/transform.hpp"

namespace christoffel {

namespace {

std::vector<std::string> names(std::size_t n, const char* prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

constexpr double kPerturbationScale = 0.1;
constexpr int kFixedPointIterations = 12;
constexpr std::size_t kMaxDraws = 1000;

}  // namespace

NodePtr random_quadratic(std::size_t n, Rng& rng, double scale) {
    NodePtr sum = constant(rng.uniform(-scale, scale));
    for (std::size_t k = 0; k < n; ++k) {
        sum = add(sum, mul(constant(rng.uniform(-scale, scale)), variable(k)));
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k; l < n; ++l) {
            sum = add(sum, mul(constant(rng.uniform(-scale, scale)), mul(variable(k), variable(l))));
        }
    }
    return sum;
}

MetricField random_spd_metric(std::size_t n, Rng& rng) {
    std::vector<std::vector<NodePtr>> a(n, std::vector<NodePtr>(n));
    for (auto& row : a) {
        for (auto& entry : row) entry = random_quadratic(n, rng);
    }
    const auto xs = names(n, "x");
    std::vector<std::vector<Expression>> g(n);
    std::vector<std::vector<NodePtr>> nodes(n, std::vector<NodePtr>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            NodePtr sum = i == j ? constant(0.5) : nullptr;
            for (std::size_t k = 0; k < n; ++k) {
                NodePtr term = mul(a[k][i], a[k][j]);
                sum = sum ? add(sum, term) : term;
            }
            nodes[i][j] = nodes[j][i] = sum;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) g[i].emplace_back(nodes[i][j], n, xs);
    }
    return MetricField(std::move(g));
}

Point random_point(std::size_t n, Rng& rng, double half_width) {
    Point x(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-half_width, half_width);
    return x;
}

CoordinateMap random_near_identity_map(std::size_t n, Rng& rng) {
    const auto xs = names(n, "x");
    const auto ys = names(n, "y");
    std::vector<Expression> q;
    for (std::size_t i = 0; i < n; ++i) q.emplace_back(random_quadratic(n, rng), n, xs);

    std::vector<Expression> forward;
    for (std::size_t i = 0; i < n; ++i) {
        forward.emplace_back(add(variable(i), mul(constant(kPerturbationScale), q[i].root_ptr())), n, xs);
    }

    std::vector<Expression> iterate;
    for (std::size_t i = 0; i < n; ++i) iterate.emplace_back(variable(i), n, ys);
    for (int it = 0; it < kFixedPointIterations; ++it) {
        std::vector<Expression> next;
        for (std::size_t i = 0; i < n; ++i) {
            const Expression qi = compose(q[i], iterate);
            next.emplace_back(sub(variable(i), mul(constant(kPerturbationScale), qi.root_ptr())), n, ys);
        }
        iterate = std::move(next);
    }
    return CoordinateMap(xs, ys, std::move(forward), std::move(iterate));
}

TransformContext random_near_identity_context(std::size_t n, Rng& rng, std::size_t* discarded) {
    for (std::size_t draw = 0; draw < kMaxDraws; ++draw) {
        CoordinateMap map = random_near_identity_map(n, rng);
        Point x = random_point(n, rng);
        try {
            return TransformContext(std::move(map), std::move(x));
        } catch (const InverseMismatchError&) {
        } catch (const SingularMapError&) {
        }
        if (discarded) ++*discarded;
    }
    throw Error("no invertible near-identity map found after " + std::to_string(kMaxDraws) + " draws");
}

}  // namespace christoffel
