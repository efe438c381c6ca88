#include "christoffel/document.hpp"

#include <cmath>

namespace christoffel {

namespace {

using json = nlohmann::json;

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(child(path, key), "required field is missing");
    return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& path, std::size_t expected) {
    if (!j.is_array()) throw SchemaError(path, "expected an array of strings");
    if (j.size() != expected) {
        throw SchemaError(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(j.size()));
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw SchemaError(child(path, i), "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

std::vector<Expression> parse_list(const std::vector<std::string>& text, const std::vector<std::string>& names,
                                   const std::string& path) {
    std::vector<Expression> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        try {
            out.push_back(parse(text[i], names));
        } catch (const ParseError& e) {
            throw ExpressionError(child(path, i), e);
        }
    }
    return out;
}

void check_names(const std::vector<std::string>& names, const std::string& path) {
    try {
        // parse() validates the name list itself.
        (void)parse("0", names);
    } catch (const ShapeError& e) {
        throw SchemaError(path, e.what());
    }
}

}  // namespace

ProblemDocument read_document(const json& j) {
    const std::string root;
    if (!j.is_object()) throw SchemaError("", "document must be a JSON object");
    ProblemDocument doc;

    const json& dim = require(j, root, "dimension");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        throw SchemaError("/dimension", "expected a positive integer");
    }
    doc.dimension = dim.get<std::size_t>();
    const std::size_t n = doc.dimension;

    doc.coordinates = string_list(require(j, root, "coordinates"), "/coordinates", n);
    check_names(doc.coordinates, "/coordinates");

    const json& metric = require(j, root, "metric");
    if (!metric.is_array() || metric.size() != n) {
        throw SchemaError("/metric", "expected an array of " + std::to_string(n) + " rows");
    }
    for (std::size_t i = 0; i < n; ++i) doc.metric.push_back(string_list(metric[i], child("/metric", i), n));

    const json& point = require(j, root, "point");
    if (!point.is_array() || point.size() != n) {
        throw SchemaError("/point", "expected an array of " + std::to_string(n) + " numbers");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!point[i].is_number() || !std::isfinite(point[i].get<double>())) {
            throw SchemaError(child("/point", i), "expected a finite number");
        }
        doc.point.push_back(point[i].get<double>());
    }

    if (auto it = j.find("map"); it != j.end()) {
        const json& m = *it;
        if (!m.is_object()) throw SchemaError("/map", "expected an object");
        if (auto d = m.find("dimension"); d != m.end() && (!d->is_number_integer() || d->get<long long>() != static_cast<long long>(n))) {
            throw SchemaError("/map/dimension", "must equal the document dimension");
        }
        if (auto xs = m.find("x_names"); xs != m.end() && string_list(*xs, "/map/x_names", n) != doc.coordinates) {
            throw SchemaError("/map/x_names", "must equal the document coordinates");
        }
        MapSpec spec;
        spec.y_names = string_list(require(m, "/map", "y_names"), "/map/y_names", n);
        check_names(spec.y_names, "/map/y_names");
        spec.forward = string_list(require(m, "/map", "forward"), "/map/forward", n);
        spec.inverse = string_list(require(m, "/map", "inverse"), "/map/inverse", n);
        doc.map = std::move(spec);
    }
    if (auto it = j.find("covector"); it != j.end()) doc.covector = string_list(*it, "/covector", n);
    if (auto it = j.find("vector"); it != j.end()) doc.vector = string_list(*it, "/vector", n);
    if (auto it = j.find("scalar"); it != j.end()) {
        if (!it->is_string()) throw SchemaError("/scalar", "expected a string");
        doc.scalar = it->get<std::string>();
    }
    return doc;
}

nlohmann::ordered_json document_digest(const ProblemDocument& doc) {
    nlohmann::ordered_json d;
    d["dimension"] = doc.dimension;
    d["coordinates"] = doc.coordinates;
    d["metric"] = doc.metric;
    d["point"] = doc.point;
    if (doc.map) {
        d["map"] = {{"y_names", doc.map->y_names}, {"forward", doc.map->forward}, {"inverse", doc.map->inverse}};
    }
    if (doc.covector) d["covector"] = *doc.covector;
    if (doc.vector) d["vector"] = *doc.vector;
    if (doc.scalar) d["scalar"] = *doc.scalar;
    return d;
}

Problem build_problem(ProblemDocument doc) {
    const std::size_t n = doc.dimension;
    Point x(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = doc.point[i];

    std::vector<std::vector<Expression>> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(parse_list(doc.metric[i], doc.coordinates, child("/metric", i)));
    const Point probes[] = {x};
    MetricField metric(std::move(g), probes);

    std::optional<CoordinateMap> map;
    if (doc.map) {
        auto fwd = parse_list(doc.map->forward, doc.coordinates, "/map/forward");
        auto inv = parse_list(doc.map->inverse, doc.map->y_names, "/map/inverse");
        map.emplace(doc.coordinates, doc.map->y_names, std::move(fwd), std::move(inv));
    }
    std::optional<std::vector<Expression>> covector;
    if (doc.covector) covector = parse_list(*doc.covector, doc.coordinates, "/covector");
    std::optional<std::vector<Expression>> vector;
    if (doc.vector) vector = parse_list(*doc.vector, doc.coordinates, "/vector");
    std::optional<Expression> scalar;
    if (doc.scalar) {
        try {
            scalar = parse(*doc.scalar, doc.coordinates);
        } catch (const ParseError& e) {
            throw ExpressionError("/scalar", e);
        }
    }

    return Problem{std::move(doc), std::move(x), std::move(metric), std::move(map),
                   std::move(covector), std::move(vector), std::move(scalar)};
}

}  // namespace christoffel
