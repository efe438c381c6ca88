#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "christoffel/chart.hpp"
#include "christoffel/error.hpp"
#include "christoffel/tensor.hpp"

namespace christoffel {

/// Input document violates the schema. `path()` is a JSON pointer.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// An expression inside the document failed to parse.
class ExpressionError : public Error {
public:
    ExpressionError(std::string path, const ParseError& cause)
        : Error(path + ": " + cause.what()), path_(std::move(path)), offset_(cause.offset()) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string path_;
    std::size_t offset_;
};

struct MapSpec {
    std::vector<std::string> y_names;
    std::vector<std::string> forward;
    std::vector<std::string> inverse;
};

/// Problem document as read from JSON:
///
///     {
///       "dimension": 2,
///       "coordinates": ["r", "th"],
///       "metric": [["1", "0"], ["0", "r^2"]],
///       "point": [2, 0.7853981633974483],
///       "map": {"y_names": [...], "forward": [...], "inverse": [...]},  // optional
///       "covector": [...], "vector": [...], "scalar": "..."              // optional
///     }
///
/// Map expressions: forward over `coordinates`, inverse over `map.y_names`.
/// Field expressions are over `coordinates`.
struct ProblemDocument {
    std::size_t dimension = 0;
    std::vector<std::string> coordinates;
    std::vector<std::vector<std::string>> metric;
    std::vector<double> point;
    std::optional<MapSpec> map;
    std::optional<std::vector<std::string>> covector;
    std::optional<std::vector<std::string>> vector;
    std::optional<std::string> scalar;
};

/// Throws SchemaError.
ProblemDocument read_document(const nlohmann::json& j);

/// Echo of the document for reports.
nlohmann::ordered_json document_digest(const ProblemDocument& doc);

/// A document with every expression parsed.
struct Problem {
    ProblemDocument doc;
    Point point;
    MetricField metric;
    std::optional<CoordinateMap> map;
    std::optional<std::vector<Expression>> covector;
    std::optional<std::vector<Expression>> vector;
    std::optional<Expression> scalar;
};

/// Throws ExpressionError (with the JSON pointer of the failing string),
/// SchemaError, AsymmetricMetricError.
Problem build_problem(ProblemDocument doc);

}  // namespace christoffel
