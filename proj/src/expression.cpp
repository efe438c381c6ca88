#include "christoffel/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "christoffel/error.hpp"

namespace christoffel {

namespace {

constexpr std::array<std::pair<std::string_view, Function>, 10> kFunctions{{
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tan", Function::Tan},
    {"exp", Function::Exp},
    {"log", Function::Log},
    {"sqrt", Function::Sqrt},
    {"sinh", Function::Sinh},
    {"cosh", Function::Cosh},
    {"tanh", Function::Tanh},
    {"atan", Function::Atan},
}};

NodePtr make_node(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

}  // namespace

std::string_view function_name(Function fn) {
    for (const auto& [name, f] : kFunctions) {
        if (f == fn) return name;
    }
    return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
    for (const auto& [n, f] : kFunctions) {
        if (n == name) return f;
    }
    return std::nullopt;
}

NodePtr constant(double v) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Constant;
    node->value = v;
    return node;
}

NodePtr variable(std::size_t index) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Variable;
    node->index = index;
    return node;
}

NodePtr negate(NodePtr a) { return make_node(NodeKind::Negate, std::move(a)); }
NodePtr add(NodePtr a, NodePtr b) { return make_node(NodeKind::Add, std::move(a), std::move(b)); }
NodePtr sub(NodePtr a, NodePtr b) { return make_node(NodeKind::Sub, std::move(a), std::move(b)); }
NodePtr mul(NodePtr a, NodePtr b) { return make_node(NodeKind::Mul, std::move(a), std::move(b)); }
NodePtr div(NodePtr a, NodePtr b) { return make_node(NodeKind::Div, std::move(a), std::move(b)); }
NodePtr pow(NodePtr a, NodePtr b) { return make_node(NodeKind::Pow, std::move(a), std::move(b)); }

NodePtr call(Function fn, NodePtr a) {
    auto node = std::make_shared<Node>();
    node->kind = NodeKind::Call;
    node->fn = fn;
    node->lhs = std::move(a);
    return node;
}

bool equal(const Node& a, const Node& b) {
    if (&a == &b) return true;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Constant:
            return a.value == b.value;
        case NodeKind::Variable:
            return a.index == b.index;
        case NodeKind::Negate:
            return equal(*a.lhs, *b.lhs);
        case NodeKind::Call:
            return a.fn == b.fn && equal(*a.lhs, *b.lhs);
        default:
            return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    }
}

// ---------------------------------------------------------------------------
// Tape: the DAG flattened in dependency order, one slot per distinct node.

class Tape {
public:
    struct Instr {
        const Node* node;
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        bool constant_rhs = false;  // Pow: exponent subtree has no variables
    };

    explicit Tape(const Node& root) { visit(root); }

    const std::vector<Instr>& instructions() const noexcept { return code_; }
    std::size_t max_variable() const noexcept { return max_variable_; }
    bool has_variables() const noexcept { return has_variables_; }

private:
    struct Visited {
        std::uint32_t slot;
        bool has_var;
    };

    Visited visit(const Node& node) {
        if (auto it = seen_.find(&node); it != seen_.end()) return it->second;
        Instr instr{&node};
        bool has_var = false;
        switch (node.kind) {
            case NodeKind::Constant:
                break;
            case NodeKind::Variable:
                has_var = true;
                has_variables_ = true;
                max_variable_ = std::max(max_variable_, node.index);
                break;
            case NodeKind::Negate:
            case NodeKind::Call: {
                auto a = visit(*node.lhs);
                instr.a = a.slot;
                has_var = a.has_var;
                break;
            }
            default: {
                auto a = visit(*node.lhs);
                auto b = visit(*node.rhs);
                instr.a = a.slot;
                instr.b = b.slot;
                instr.constant_rhs = !b.has_var;
                has_var = a.has_var || b.has_var;
                break;
            }
        }
        Visited v{static_cast<std::uint32_t>(code_.size()), has_var};
        code_.push_back(instr);
        seen_.emplace(&node, v);
        return v;
    }

    std::vector<Instr> code_;
    std::unordered_map<const Node*, Visited> seen_;
    std::size_t max_variable_ = 0;
    bool has_variables_ = false;
};

namespace {

double primal(double x) { return x; }
double primal(const HyperDual& x) { return x.value; }

bool finite(double x) { return std::isfinite(x); }
bool finite(const HyperDual& x) { return isfinite(x); }

template <typename T>
T apply(Function fn, const T& a) {
    using std::atan, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt,
        std::tan, std::tanh;
    switch (fn) {
        case Function::Sin: return sin(a);
        case Function::Cos: return cos(a);
        case Function::Tan: return tan(a);
        case Function::Exp: return exp(a);
        case Function::Log: return log(a);
        case Function::Sqrt: return sqrt(a);
        case Function::Sinh: return sinh(a);
        case Function::Cosh: return cosh(a);
        case Function::Tanh: return tanh(a);
        case Function::Atan: return atan(a);
    }
    return a;
}

template <typename T>
T integer_power(T base, long long k) {
    T result(1.0);
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

[[noreturn]] void domain_error(const std::string& what, const Node& node,
                               const std::vector<std::string>& names) {
    throw DomainError(what, print_abbreviated(node, names, 120));
}

template <typename T>
T run(const Tape& tape, std::span<const T> point, const std::vector<std::string>& names) {
    const auto& code = tape.instructions();
    std::vector<T> slot(code.size());
    for (std::size_t k = 0; k < code.size(); ++k) {
        const auto& in = code[k];
        const Node& node = *in.node;
        T r{};
        switch (node.kind) {
            case NodeKind::Constant:
                r = T(node.value);
                break;
            case NodeKind::Variable:
                r = point[node.index];
                break;
            case NodeKind::Negate:
                r = -slot[in.a];
                break;
            case NodeKind::Add:
                r = slot[in.a] + slot[in.b];
                break;
            case NodeKind::Sub:
                r = slot[in.a] - slot[in.b];
                break;
            case NodeKind::Mul:
                r = slot[in.a] * slot[in.b];
                break;
            case NodeKind::Div:
                if (primal(slot[in.b]) == 0.0) domain_error("division by zero", node, names);
                r = slot[in.a] / slot[in.b];
                break;
            case NodeKind::Pow: {
                const T& base = slot[in.a];
                const double e = primal(slot[in.b]);
                if (in.constant_rhs && e == std::nearbyint(e) && std::abs(e) <= 1 << 30) {
                    const auto k_exp = static_cast<long long>(e);
                    if (k_exp < 0) {
                        if (primal(base) == 0.0) {
                            domain_error("negative power of zero", node, names);
                        }
                        r = T(1.0) / integer_power(base, -k_exp);
                    } else {
                        r = integer_power(base, k_exp);
                    }
                } else {
                    if (!(primal(base) > 0.0)) {
                        domain_error("non-integer power of non-positive base", node, names);
                    }
                    using std::exp, std::log;
                    r = exp(slot[in.b] * log(base));
                }
                break;
            }
            case NodeKind::Call: {
                const double v = primal(slot[in.a]);
                if (node.fn == Function::Log && !(v > 0.0)) {
                    domain_error("logarithm of non-positive value", node, names);
                }
                if (node.fn == Function::Sqrt && v < 0.0) {
                    domain_error("square root of negative value", node, names);
                }
                r = apply(node.fn, slot[in.a]);
                break;
            }
        }
        if (!finite(r)) domain_error("non-finite value", node, names);
        slot[k] = r;
    }
    return slot.back();
}

std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
}

}  // namespace

Expression::Expression(NodePtr root, std::size_t n_vars, std::vector<std::string> names)
    : root_(std::move(root)), n_vars_(n_vars) {
    if (!root_) throw ShapeError("expression has no root node");
    if (n_vars_ == 0) throw ShapeError("expression needs at least one coordinate");
    if (names.empty()) names = default_names(n_vars_);
    if (names.size() != n_vars_) {
        throw ShapeError("expected " + std::to_string(n_vars_) + " coordinate names, got " +
                         std::to_string(names.size()));
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
    tape_ = std::make_shared<const Tape>(*root_);
    if (tape_->has_variables() && tape_->max_variable() >= n_vars_) {
        throw ShapeError("variable index " + std::to_string(tape_->max_variable()) +
                         " out of range for " + std::to_string(n_vars_) + " coordinates");
    }
}

std::size_t Expression::size() const noexcept { return tape_->instructions().size(); }

double Expression::eval(std::span<const double> point) const {
    if (point.size() != n_vars_) {
        throw ShapeError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                         std::to_string(n_vars_));
    }
    return run<double>(*tape_, point, *names_);
}

HyperDual Expression::eval(std::span<const HyperDual> point) const {
    if (point.size() != n_vars_) {
        throw ShapeError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                         std::to_string(n_vars_));
    }
    return run<HyperDual>(*tape_, point, *names_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Number: return "number";
        case Tok::Name: return "identifier";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::End: return "end of input";
    }
    return "?";
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> variables)
        : text_(text), variables_(variables) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr e = expr();
        if (tok_.kind != Tok::End) {
            throw ParseError(tok_.offset,
                             "expected operator or end of input, found " + std::string(describe(tok_.kind)));
        }
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            const Tok op = tok_.kind;
            advance();
            NodePtr rhs = term();
            lhs = op == Tok::Plus ? add(lhs, rhs) : sub(lhs, rhs);
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = power();
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            const Tok op = tok_.kind;
            advance();
            NodePtr rhs = power();
            lhs = op == Tok::Star ? mul(lhs, rhs) : div(lhs, rhs);
        }
        return lhs;
    }

    NodePtr power() {
        NodePtr base = unary();
        if (tok_.kind == Tok::Caret) {
            advance();
            return pow(base, power());
        }
        return base;
    }

    NodePtr unary() {
        if (tok_.kind == Tok::Minus) {
            advance();
            return negate(unary());
        }
        return primary();
    }

    NodePtr primary() {
        const Token t = tok_;
        switch (t.kind) {
            case Tok::Number:
                advance();
                return constant(t.number);
            case Tok::LParen: {
                advance();
                NodePtr inner = expr();
                expect(Tok::RParen);
                return inner;
            }
            case Tok::Name: {
                advance();
                for (std::size_t i = 0; i < variables_.size(); ++i) {
                    if (variables_[i] == t.text) return variable(i);
                }
                if (auto fn = function_from_name(t.text)) {
                    expect(Tok::LParen);
                    NodePtr arg = expr();
                    expect(Tok::RParen);
                    return call(*fn, arg);
                }
                throw UnknownIdentifierError(t.offset, std::string(t.text));
            }
            default:
                throw ParseError(t.offset, "expected expression, found " + std::string(describe(t.kind)));
        }
    }

    void expect(Tok kind) {
        if (tok_.kind != kind) {
            throw ParseError(tok_.offset, "expected " + std::string(describe(kind)) + ", found " +
                                              std::string(describe(tok_.kind)));
        }
        advance();
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) {
            tok_ = {Tok::End, start, {}};
            return;
        }
        const char c = text_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            tok_ = {k, start, text_.substr(start, 1)};
        };
        switch (c) {
            case '+': return single(Tok::Plus);
            case '-': return single(Tok::Minus);
            case '*': return single(Tok::Star);
            case '/': return single(Tok::Slash);
            case '^': return single(Tok::Caret);
            case '(': return single(Tok::LParen);
            case ')': return single(Tok::RParen);
            default: break;
        }
        if (is_digit(c) || (c == '.' && pos_ + 1 < text_.size() && is_digit(text_[pos_ + 1]))) {
            lex_number(start);
            return;
        }
        if (is_name_start(c)) {
            while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
            tok_ = {Tok::Name, start, text_.substr(start, pos_ - start)};
            return;
        }
        throw ParseError(start, std::string("unexpected character '") + c + "'");
    }

    void lex_number(std::size_t start) {
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && is_digit(text_[p])) {
                pos_ = p;
                while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
            }
        }
        const std::string_view lexeme = text_.substr(start, pos_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
        if (ec != std::errc() || ptr != lexeme.data() + lexeme.size() || !std::isfinite(v)) {
            throw ParseError(start, "invalid number '" + std::string(lexeme) + "'");
        }
        tok_ = {Tok::Number, start, lexeme, v};
    }

    std::string_view text_;
    std::span<const std::string> variables_;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, 0, {}};
};

void check_variable_names(std::span<const std::string> variables) {
    std::unordered_set<std::string_view> seen;
    for (const auto& name : variables) {
        if (name.empty() || !is_name_start(name.front())) {
            throw ShapeError("invalid coordinate name '" + name + "'");
        }
        for (char c : name) {
            if (!is_name_char(c)) throw ShapeError("invalid coordinate name '" + name + "'");
        }
        if (function_from_name(name)) {
            throw ShapeError("coordinate name '" + name + "' shadows a function");
        }
        if (!seen.insert(name).second) throw ShapeError("duplicate coordinate name '" + name + "'");
    }
}

}  // namespace

Expression parse(std::string_view text, std::span<const std::string> variables) {
    check_variable_names(variables);
    Parser parser(text, variables);
    NodePtr root = parser.parse_all();
    return Expression(std::move(root), variables.size(),
                      std::vector<std::string>(variables.begin(), variables.end()));
}

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

class Printer {
public:
    Printer(std::span<const std::string> names, std::size_t limit) : names_(names), limit_(limit) {}

    void print(const Node& node) {
        if (out_.size() > limit_) {
            truncated_ = true;
            return;
        }
        switch (node.kind) {
            case NodeKind::Constant:
                if (std::signbit(node.value)) {
                    out_ += "(-";
                    out_ += format_number(-node.value);
                    out_ += ')';
                } else {
                    out_ += format_number(node.value);
                }
                return;
            case NodeKind::Variable:
                if (node.index < names_.size()) {
                    out_ += names_[node.index];
                } else {
                    out_ += "x" + std::to_string(node.index + 1);
                }
                return;
            case NodeKind::Negate:
                out_ += "(-";
                print(*node.lhs);
                out_ += ')';
                return;
            case NodeKind::Call:
                out_ += function_name(node.fn);
                out_ += '(';
                print(*node.lhs);
                out_ += ')';
                return;
            default:
                break;
        }
        const char* op = node.kind == NodeKind::Add   ? " + "
                         : node.kind == NodeKind::Sub ? " - "
                         : node.kind == NodeKind::Mul ? " * "
                         : node.kind == NodeKind::Div ? " / "
                                                      : " ^ ";
        out_ += '(';
        print(*node.lhs);
        out_ += op;
        print(*node.rhs);
        out_ += ')';
    }

    std::string take() {
        if (truncated_) out_ += "...";
        return std::move(out_);
    }

private:
    std::span<const std::string> names_;
    std::size_t limit_;
    std::string out_;
    bool truncated_ = false;
};

}  // namespace

std::string print(const Node& node, std::span<const std::string> variables) {
    Printer p(variables, std::numeric_limits<std::size_t>::max());
    p.print(node);
    return p.take();
}

std::string print(const Expression& e, std::span<const std::string> variables) {
    return print(e.root(), variables);
}

std::string print(const Expression& e) { return print(e.root(), e.names()); }

std::string print_abbreviated(const Node& node, std::span<const std::string> variables,
                              std::size_t limit) {
    Printer p(variables, limit);
    p.print(node);
    return p.take();
}

// ---------------------------------------------------------------------------
// Derivatives and composition

SecondDerivative derivative2(const Expression& e, std::span<const double> point, std::size_t i,
                             std::size_t j) {
    if (i >= e.n_vars() || j >= e.n_vars()) {
        throw ShapeError("derivative index out of range");
    }
    if (point.size() != e.n_vars()) {
        throw ShapeError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                         std::to_string(e.n_vars()));
    }
    std::vector<HyperDual> seeded(point.begin(), point.end());
    seeded[i].d1 = 1.0;
    seeded[j].d2 = 1.0;
    const HyperDual r = e.eval(seeded);
    return {r.value, r.d1, r.d2, r.d12};
}

std::vector<double> gradient(const Expression& e, std::span<const double> point) {
    std::vector<double> g(e.n_vars());
    for (std::size_t i = 0; i < e.n_vars(); ++i) g[i] = derivative2(e, point, i, i).d_i;
    return g;
}

namespace {

NodePtr substitute(const NodePtr& node, std::span<const Expression> args,
                   std::unordered_map<const Node*, NodePtr>& memo) {
    if (auto it = memo.find(node.get()); it != memo.end()) return it->second;
    NodePtr out;
    switch (node->kind) {
        case NodeKind::Constant:
            out = node;
            break;
        case NodeKind::Variable:
            out = args[node->index].root_ptr();
            break;
        case NodeKind::Negate:
            out = negate(substitute(node->lhs, args, memo));
            break;
        case NodeKind::Call:
            out = call(node->fn, substitute(node->lhs, args, memo));
            break;
        default: {
            auto copy = std::make_shared<Node>(*node);
            copy->lhs = substitute(node->lhs, args, memo);
            copy->rhs = substitute(node->rhs, args, memo);
            out = std::move(copy);
            break;
        }
    }
    memo.emplace(node.get(), out);
    return out;
}

}  // namespace

Expression compose(const Expression& e, std::span<const Expression> args) {
    if (args.size() != e.n_vars()) {
        throw ShapeError("composition needs " + std::to_string(e.n_vars()) + " arguments, got " +
                         std::to_string(args.size()));
    }
    const std::size_t inner = args.front().n_vars();
    for (const auto& a : args) {
        if (a.n_vars() != inner) throw ShapeError("composition arguments disagree on dimension");
    }
    std::unordered_map<const Node*, NodePtr> memo;
    return Expression(substitute(e.root_ptr(), args, memo), inner, args.front().names());
}

}  // namespace christoffel
