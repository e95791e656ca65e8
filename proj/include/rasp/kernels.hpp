#pragma once

// Data-parallel inner loops of selector and aggregate evaluation.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variants are bit-identical: floating point reductions use a
// fixed four-lane accumulation order in both, so the dispatch choice never
// changes an evaluation result.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "rasp/atom.hpp"

namespace rasp::kernels {

using Mask = std::span<const std::uint8_t>;
using MutMask = std::span<std::uint8_t>;

struct KernelTable {
    std::string_view name;

    /// out[i] = a[i] & b[i] over 0/1 bytes.
    void (*mask_and)(Mask a, Mask b, MutMask out);
    void (*mask_or)(Mask a, Mask b, MutMask out);
    void (*mask_not)(Mask a, MutMask out);
    /// Number of set cells.
    std::size_t (*mask_count)(Mask row);
    /// Sum of values[i] where row[i] is set.
    double (*masked_sum)(Mask row, std::span<const double> values);
    /// out[k] = numeric_compare(p, keys[k], query).
    void (*compare_row)(Predicate p, std::span<const double> keys, double query, MutMask out);
    /// out[k] = keys[k] * factor.
    void (*scale_row)(std::span<const double> keys, double factor, std::span<double> out);
    /// Lowest index attaining the maximal score among set cells; row.size() when none is set.
    std::size_t (*masked_argmax)(Mask row, std::span<const double> scores);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variants were not built or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Table used by the evaluator. AVX2 when available unless the environment
/// variable RASP_KERNELS is set to "scalar".
const KernelTable& active();

}  // namespace rasp::kernels
