#include "support.hpp"

#include <charconv>

namespace christoffel::testing {

namespace {

std::string number(Rng& rng) {
    const double v = std::round(rng.uniform(0.1, 3.0) * 100.0) / 100.0;
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng.unit() * static_cast<double>(n)); }

}  // namespace

std::string random_expression_text(Rng& rng, const std::vector<std::string>& names, int depth) {
    if (depth <= 0 || rng.unit() < 0.2) {
        return rng.unit() < 0.6 ? names[pick(rng, names.size())] : number(rng);
    }
    const auto sub = [&] { return random_expression_text(rng, names, depth - 1); };
    switch (pick(rng, 16)) {
        case 0: return sub() + " + " + sub();
        case 1: return sub() + " - " + sub();
        case 2: return "(" + sub() + ")*(" + sub() + ")";
        case 3: return "(" + sub() + ")/(2 + (" + sub() + ")^2)";
        case 4: return "(" + sub() + ")^" + std::to_string(1 + pick(rng, 3));
        case 5: return "sin(" + sub() + ")";
        case 6: return "cos(" + sub() + ")";
        case 7: return "exp(tanh(" + sub() + "))";
        case 8: return "log(1.5 + sin(" + sub() + "))";
        case 9: return "sqrt(1 + (" + sub() + ")^2)";
        case 10: return "tan(0.5*tanh(" + sub() + "))";
        case 11: return "sinh(tanh(" + sub() + "))";
        case 12: return "cosh(tanh(" + sub() + "))";
        case 13: return "atan(" + sub() + ")";
        case 14: return "(1.5 + sin(" + sub() + "))^" + number(rng);
        default: return "-(" + sub() + ")";
    }
}

}  // namespace christoffel::testing
