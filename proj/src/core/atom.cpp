#include "rasp/atom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>

#include "rasp/error.hpp"

namespace rasp {

std::string_view kind_name(AtomKind kind) {
    switch (kind) {
        case AtomKind::Null: return "Null";
        case AtomKind::Token: return "Token";
        case AtomKind::Number: return "Number";
        case AtomKind::Bool: return "Bool";
    }
    return "?";
}

Atom Atom::token(std::string text) {
    if (text.empty()) throw EvalError("token atoms must be non-empty");
    return Atom{Storage{std::move(text)}};
}

Atom Atom::number(double value) {
    if (!std::isfinite(value)) throw EvalError("non-finite number produced");
    return Atom{Storage{value == 0.0 ? 0.0 : value}};
}

std::size_t Atom::hash() const noexcept {
    std::size_t seed = value_.index() * 0x9e3779b97f4a7c15ULL;
    switch (kind()) {
        case AtomKind::Null: break;
        case AtomKind::Token: seed ^= std::hash<std::string>{}(as_token()); break;
        case AtomKind::Number: seed ^= std::hash<double>{}(as_number()); break;
        case AtomKind::Bool: seed ^= as_bool() ? 0x51ed27ULL : 0x2c1b3ULL; break;
    }
    return seed;
}

std::string_view symbol(Predicate p) {
    switch (p) {
        case Predicate::Eq: return "==";
        case Predicate::Ne: return "!=";
        case Predicate::Lt: return "<";
        case Predicate::Le: return "<=";
        case Predicate::Gt: return ">";
        case Predicate::Ge: return ">=";
    }
    return "?";
}

bool numeric_equal(double a, double b) noexcept {
    const double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
    return std::abs(a - b) <= kNumericTolerance * scale;
}

bool numeric_compare(Predicate p, double a, double b) noexcept {
    const bool eq = numeric_equal(a, b);
    switch (p) {
        case Predicate::Eq: return eq;
        case Predicate::Ne: return !eq;
        case Predicate::Lt: return a < b && !eq;
        case Predicate::Le: return a < b || eq;
        case Predicate::Gt: return a > b && !eq;
        case Predicate::Ge: return a > b || eq;
    }
    return false;
}

namespace {

bool is_order(Predicate p) { return p != Predicate::Eq && p != Predicate::Ne; }

[[noreturn]] void incomparable(Predicate p, const Atom& key, const Atom& query) {
    throw EvalError("cannot apply '" + std::string(symbol(p)) + "' to " + std::string(kind_name(key.kind())) +
                    " and " + std::string(kind_name(query.kind())));
}

}  // namespace

bool apply_predicate(Predicate p, const Atom& key, const Atom& query) {
    if (key.is_numeric() && query.is_numeric()) {
        return numeric_compare(p, coerce_numeric(key), coerce_numeric(query));
    }
    if (key.is_token() && query.is_token()) {
        const int c = key.as_token().compare(query.as_token());
        switch (p) {
            case Predicate::Eq: return c == 0;
            case Predicate::Ne: return c != 0;
            case Predicate::Lt: return c < 0;
            case Predicate::Le: return c <= 0;
            case Predicate::Gt: return c > 0;
            case Predicate::Ge: return c >= 0;
        }
    }
    if (is_order(p)) incomparable(p, key, query);
    // Remaining pairs differ in kind, except Null/Null.
    const bool same = key.is_null() && query.is_null();
    return p == Predicate::Eq ? same : !same;
}

double coerce_numeric(const Atom& a) {
    if (a.is_number()) return a.as_number();
    if (a.is_bool()) return a.as_bool() ? 1.0 : 0.0;
    throw CoercionError("cannot use " + std::string(kind_name(a.kind())) + " value '" + to_display(a) +
                        "' as a number");
}

std::string to_display(const Atom& a) {
    switch (a.kind()) {
        case AtomKind::Null: return "-";
        case AtomKind::Token: return a.as_token();
        case AtomKind::Bool: return a.as_bool() ? "T" : "F";
        case AtomKind::Number: {
            const double v = a.as_number();
            const double r = std::round(v);
            if (std::abs(v - r) <= kNumericTolerance * std::max(1.0, std::abs(v)) && std::abs(r) < 1e15) {
                return std::to_string(static_cast<long long>(r));
            }
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, res.ptr);
        }
    }
    return "?";
}

}  // namespace rasp
