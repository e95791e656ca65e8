#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rasp/atom.hpp"

namespace rasp {

/// Splits UTF-8 text into code points. Invalid bytes become single-byte items.
std::vector<std::string> split_code_points(std::string_view text);

/// The value of an s-op on one input: one atom per input position.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::vector<Atom> items) : items_(std::move(items)) {}

    /// One Token per code point of `text`.
    static Sequence from_string(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
    [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
    [[nodiscard]] const Atom& operator[](std::size_t i) const { return items_[i]; }
    [[nodiscard]] Atom& operator[](std::size_t i) { return items_[i]; }
    [[nodiscard]] std::span<const Atom> items() const noexcept { return items_; }
    [[nodiscard]] auto begin() const noexcept { return items_.begin(); }
    [[nodiscard]] auto end() const noexcept { return items_.end(); }

    /// Numeric view (Bool as 0/1) when every item is numeric.
    [[nodiscard]] std::optional<std::vector<double>> numeric_view() const;

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    std::vector<Atom> items_;
};

/// n copies of `a`; throws EvalError when n == 0.
Sequence broadcast_const(const Atom& a, std::size_t n);

/// Concatenated string when every item is a single-code-point token,
/// otherwise a bracketed, comma separated list.
std::string to_display(const Sequence& s);

/// n x n selection bits; row = query position, column = key position.
/// Stored one byte per cell (0 or 1), row-major.
class SelectionMatrix {
public:
    SelectionMatrix() = default;
    explicit SelectionMatrix(std::size_t n) : n_(n), bits_(n * n, 0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] bool at(std::size_t query, std::size_t key) const { return bits_[query * n_ + key] != 0; }
    void set(std::size_t query, std::size_t key, bool v) { bits_[query * n_ + key] = v ? 1 : 0; }

    [[nodiscard]] std::span<const std::uint8_t> row(std::size_t query) const {
        return std::span<const std::uint8_t>(bits_).subspan(query * n_, n_);
    }
    [[nodiscard]] std::span<std::uint8_t> row(std::size_t query) {
        return std::span<std::uint8_t>(bits_).subspan(query * n_, n_);
    }
    [[nodiscard]] std::span<const std::uint8_t> cells() const noexcept { return bits_; }
    [[nodiscard]] std::span<std::uint8_t> cells() noexcept { return bits_; }

    /// Builds from nested rows of booleans; throws EvalError if not square.
    static SelectionMatrix from_rows(const std::vector<std::vector<bool>>& rows);

    friend bool operator==(const SelectionMatrix&, const SelectionMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// n x n real matrix produced by a scorer; entry(q, k) = key[k] * query[q].
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    explicit ScoreMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double at(std::size_t query, std::size_t key) const { return values_[query * n_ + key]; }
    [[nodiscard]] std::span<const double> row(std::size_t query) const {
        return std::span<const double>(values_).subspan(query * n_, n_);
    }
    [[nodiscard]] std::span<double> row(std::size_t query) {
        return std::span<double>(values_).subspan(query * n_, n_);
    }

    friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

}  // namespace rasp
