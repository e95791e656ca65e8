#pragma once

// Scalar values manipulated by RASP programs and the comparison rules
// shared by select predicates and elementwise comparisons.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace rasp {

enum class AtomKind : std::uint8_t { Null, Token, Number, Bool };

std::string_view kind_name(AtomKind kind);

struct NullAtom {
    friend bool operator==(NullAtom, NullAtom) { return true; }
};

class Atom {
public:
    Atom() = default;  // Null

    static Atom null() { return Atom{}; }
    /// Throws EvalError on an empty payload.
    static Atom token(std::string text);
    /// Throws EvalError on NaN or infinity.
    static Atom number(double value);
    static Atom boolean(bool value) { return Atom{Storage{value}}; }

    [[nodiscard]] AtomKind kind() const noexcept { return static_cast<AtomKind>(value_.index()); }
    [[nodiscard]] bool is_null() const noexcept { return kind() == AtomKind::Null; }
    [[nodiscard]] bool is_token() const noexcept { return kind() == AtomKind::Token; }
    [[nodiscard]] bool is_number() const noexcept { return kind() == AtomKind::Number; }
    [[nodiscard]] bool is_bool() const noexcept { return kind() == AtomKind::Bool; }
    /// Number or Bool; the values that take part in arithmetic.
    [[nodiscard]] bool is_numeric() const noexcept { return is_number() || is_bool(); }

    [[nodiscard]] const std::string& as_token() const { return std::get<std::string>(value_); }
    [[nodiscard]] double as_number() const { return std::get<double>(value_); }
    [[nodiscard]] bool as_bool() const { return std::get<bool>(value_); }

    /// Structural identity: same variant and same payload. Numbers compare by
    /// value (so 0.0 and -0.0 are identical), not with the tolerance used by
    /// predicates.
    friend bool operator==(const Atom& a, const Atom& b) { return a.value_ == b.value_; }

    [[nodiscard]] std::size_t hash() const noexcept;

private:
    using Storage = std::variant<NullAtom, std::string, double, bool>;
    explicit Atom(Storage v) : value_(std::move(v)) {}
    Storage value_;
};

enum class Predicate : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };

std::string_view symbol(Predicate p);

/// Relative tolerance for numeric equality. Averages such as 3 * (2/3) must
/// compare equal to the integer they denote.
inline constexpr double kNumericTolerance = 1e-9;

bool numeric_equal(double a, double b) noexcept;
bool numeric_compare(Predicate p, double a, double b) noexcept;

/// Evaluates `key p query`. Token/Token orders lexicographically,
/// Bool counts as 0/1, Null equals only Null. Ordering across
/// incompatible kinds throws EvalError naming both kinds.
bool apply_predicate(Predicate p, const Atom& key, const Atom& query);

/// Number unchanged, Bool to 0/1. Throws CoercionError otherwise.
double coerce_numeric(const Atom& a);

/// Display used by the REPL and golden files: bare tokens, integral numbers
/// without a fractional part, T/F for booleans, "-" for Null.
std::string to_display(const Atom& a);

}  // namespace rasp
