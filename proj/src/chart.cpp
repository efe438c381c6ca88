#include "christoffel/chart.hpp"

#include <cmath>
#include <sstream>

#include "christoffel/error.hpp"

namespace christoffel {

CoordinateMap::CoordinateMap(std::vector<std::string> x_names, std::vector<std::string> y_names,
                             std::vector<Expression> forward, std::vector<Expression> inverse)
    : x_names_(std::move(x_names)),
      y_names_(std::move(y_names)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)) {
    const std::size_t n = forward_.size();
    if (n == 0) throw ShapeError("coordinate map must have at least one component");
    if (inverse_.size() != n || x_names_.size() != n || y_names_.size() != n) {
        throw ShapeError("coordinate map components and names must all have dimension " + std::to_string(n));
    }
    for (const auto& e : forward_) {
        if (e.n_vars() != n) throw ShapeError("forward component is over the wrong number of coordinates");
    }
    for (const auto& e : inverse_) {
        if (e.n_vars() != n) throw ShapeError("inverse component is over the wrong number of coordinates");
    }
}

CoordinateMap CoordinateMap::parse(std::vector<std::string> x_names, std::vector<std::string> y_names,
                                   const std::vector<std::string>& forward,
                                   const std::vector<std::string>& inverse) {
    std::vector<Expression> fwd;
    std::vector<Expression> inv;
    for (const auto& s : forward) fwd.push_back(christoffel::parse(s, x_names));
    for (const auto& s : inverse) inv.push_back(christoffel::parse(s, y_names));
    return CoordinateMap(std::move(x_names), std::move(y_names), std::move(fwd), std::move(inv));
}

CoordinateMap CoordinateMap::identity(std::size_t n) {
    std::vector<std::string> xs;
    std::vector<std::string> ys;
    std::vector<Expression> fwd;
    std::vector<Expression> inv;
    for (std::size_t i = 0; i < n; ++i) {
        xs.push_back("x" + std::to_string(i + 1));
        ys.push_back("y" + std::to_string(i + 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        fwd.emplace_back(variable(i), n, xs);
        inv.emplace_back(variable(i), n, ys);
    }
    return CoordinateMap(std::move(xs), std::move(ys), std::move(fwd), std::move(inv));
}

namespace {

Point eval_all(const std::vector<Expression>& components, const Point& at) {
    if (static_cast<std::size_t>(at.size()) != components.size()) {
        throw ShapeError("point has the wrong dimension for this map");
    }
    Point out(at.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = components[i].eval(as_span(at));
    }
    return out;
}

Tensor3 hessian_of(const std::vector<Expression>& components, const Point& at) {
    const std::size_t n = components.size();
    Tensor3 h(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                h(m, a, b) = h(m, b, a) = derivative2(components[m], as_span(at), a, b).d_ij;
            }
        }
    }
    return h;
}

}  // namespace

Point CoordinateMap::apply(const Point& x) const { return eval_all(forward_, x); }

Point CoordinateMap::apply_inverse(const Point& y) const { return eval_all(inverse_, y); }

double CoordinateMap::round_trip_error(const Point& x) const {
    return (apply_inverse(apply(x)) - x).cwiseAbs().maxCoeff();
}

CoordinateMap compose(const CoordinateMap& first, const CoordinateMap& second) {
    if (first.dim() != second.dim()) throw ShapeError("composed maps must have equal dimension");
    std::vector<Expression> fwd;
    std::vector<Expression> inv;
    for (const auto& e : second.forward()) fwd.push_back(christoffel::compose(e, first.forward()));
    for (const auto& e : first.inverse()) inv.push_back(christoffel::compose(e, second.inverse()));
    return CoordinateMap(first.x_names(), second.y_names(), std::move(fwd), std::move(inv));
}

Matrix jacobian_of(const std::vector<Expression>& components, const Point& at) {
    const std::size_t n = components.size();
    Matrix j(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        const auto row = gradient(components[a], as_span(at));
        for (std::size_t m = 0; m < n; ++m) j(a, m) = row[m];
    }
    return j;
}

JacobianPair jacobian(const CoordinateMap& map, const Point& x) {
    Matrix fwd = jacobian_of(map.forward(), x);
    const double det = fwd.determinant();
    if (!(std::abs(det) >= kSingularMapThreshold)) {
        std::ostringstream msg;
        msg << "Jacobian determinant " << det << " is below the invertibility threshold";
        throw SingularMapError(msg.str());
    }
    Matrix inv = jacobian_of(map.inverse(), map.apply(x));
    const auto n = static_cast<Eigen::Index>(map.dim());
    const double defect = inf_norm(fwd * inv - Matrix::Identity(n, n));
    if (defect > kJacobianProductTolerance) {
        std::ostringstream msg;
        msg << "forward and inverse Jacobians are not inverse to each other (defect " << defect << ")";
        throw InverseMismatchError(msg.str());
    }
    return {std::move(fwd), std::move(inv)};
}

Tensor3 hessian_inverse_map(const CoordinateMap& map, const Point& y) { return hessian_of(map.inverse(), y); }

Tensor3 hessian_forward_map(const CoordinateMap& map, const Point& x) { return hessian_of(map.forward(), x); }

}  // namespace christoffel
