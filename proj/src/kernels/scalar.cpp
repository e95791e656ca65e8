#include <algorithm>
#include <cmath>

#include "rasp/kernels.hpp"

namespace rasp::kernels {
namespace {

void mask_and(Mask a, Mask b, MutMask out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] & b[i];
}

void mask_or(Mask a, Mask b, MutMask out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] | b[i];
}

void mask_not(Mask a, MutMask out) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] ^ 1;
}

std::size_t mask_count(Mask row) {
    std::size_t c = 0;
    for (auto b : row) c += b;
    return c;
}

// Four interleaved accumulators, combined as (a0 + a1) + (a2 + a3), then the
// tail in order. The AVX2 variant reduces in exactly this order.
double masked_sum(Mask row, std::span<const double> values) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t n = row.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        for (std::size_t j = 0; j < 4; ++j) acc[j] += row[i + j] ? values[i + j] : 0.0;
    }
    double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (; i < n; ++i) total += row[i] ? values[i] : 0.0;
    return total;
}

void compare_row(Predicate p, std::span<const double> keys, double query, MutMask out) {
    for (std::size_t k = 0; k < keys.size(); ++k) out[k] = numeric_compare(p, keys[k], query) ? 1 : 0;
}

void scale_row(std::span<const double> keys, double factor, std::span<double> out) {
    for (std::size_t k = 0; k < keys.size(); ++k) out[k] = keys[k] * factor;
}

std::size_t masked_argmax(Mask row, std::span<const double> scores) {
    std::size_t best = row.size();
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] && (best == row.size() || scores[k] > scores[best])) best = k;
    }
    return best;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar", mask_and, mask_or, mask_not, mask_count, masked_sum, compare_row, scale_row, masked_argmax,
    };
    return table;
}

}  // namespace rasp::kernels
