// AVX2 variants. This translation unit is compiled with -mavx2; nothing in it
// may run before active() has checked the CPU.

#include <immintrin.h>

#include <cstring>

#include "rasp/kernels.hpp"

namespace rasp::kernels {
namespace {

void mask_and(Mask a, Mask b, MutMask out) {
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_and_si256(x, y));
    }
    for (; i < n; ++i) out[i] = a[i] & b[i];
}

void mask_or(Mask a, Mask b, MutMask out) {
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_or_si256(x, y));
    }
    for (; i < n; ++i) out[i] = a[i] | b[i];
}

void mask_not(Mask a, MutMask out) {
    const std::size_t n = out.size();
    const __m256i ones = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + i), _mm256_xor_si256(x, ones));
    }
    for (; i < n; ++i) out[i] = a[i] ^ 1;
}

std::size_t mask_count(Mask row) {
    const std::size_t n = row.size();
    __m256i acc = _mm256_setzero_si256();
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row.data() + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(x, zero));
    }
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::size_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) c += row[i];
    return c;
}

// Expands four 0/1 bytes into a 4 x 64-bit all-ones/all-zeros lane mask.
inline __m256d lane_mask(const std::uint8_t* p) {
    std::int32_t packed;
    std::memcpy(&packed, p, sizeof packed);
    const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    return _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
}

double masked_sum(Mask row, std::span<const double> values) {
    const std::size_t n = row.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(values.data() + i);
        acc = _mm256_add_pd(acc, _mm256_and_pd(v, lane_mask(row.data() + i)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) total += row[i] ? values[i] : 0.0;
    return total;
}

inline void store_lanes(__m256d m, std::uint8_t* out) {
    const int bits = _mm256_movemask_pd(m);
    out[0] = bits & 1;
    out[1] = (bits >> 1) & 1;
    out[2] = (bits >> 2) & 1;
    out[3] = (bits >> 3) & 1;
}

void compare_row(Predicate p, std::span<const double> keys, double query, MutMask out) {
    const std::size_t n = keys.size();
    const __m256d q = _mm256_set1_pd(query);
    const __m256d sign = _mm256_set1_pd(-0.0);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d tol = _mm256_set1_pd(kNumericTolerance);
    const __m256d qabs = _mm256_andnot_pd(sign, q);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d key = _mm256_loadu_pd(keys.data() + k);
        const __m256d diff = _mm256_andnot_pd(sign, _mm256_sub_pd(key, q));
        const __m256d scale = _mm256_max_pd(one, _mm256_max_pd(_mm256_andnot_pd(sign, key), qabs));
        const __m256d eq = _mm256_cmp_pd(diff, _mm256_mul_pd(tol, scale), _CMP_LE_OQ);
        __m256d r;
        switch (p) {
            case Predicate::Eq: r = eq; break;
            case Predicate::Ne: r = _mm256_xor_pd(eq, _mm256_castsi256_pd(_mm256_set1_epi64x(-1))); break;
            case Predicate::Lt: r = _mm256_andnot_pd(eq, _mm256_cmp_pd(key, q, _CMP_LT_OQ)); break;
            case Predicate::Le: r = _mm256_or_pd(eq, _mm256_cmp_pd(key, q, _CMP_LT_OQ)); break;
            case Predicate::Gt: r = _mm256_andnot_pd(eq, _mm256_cmp_pd(key, q, _CMP_GT_OQ)); break;
            case Predicate::Ge: r = _mm256_or_pd(eq, _mm256_cmp_pd(key, q, _CMP_GT_OQ)); break;
            default: r = _mm256_setzero_pd(); break;
        }
        store_lanes(r, out.data() + k);
    }
    for (; k < n; ++k) out[k] = numeric_compare(p, keys[k], query) ? 1 : 0;
}

void scale_row(std::span<const double> keys, double factor, std::span<double> out) {
    const std::size_t n = keys.size();
    const __m256d f = _mm256_set1_pd(factor);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        _mm256_storeu_pd(out.data() + k, _mm256_mul_pd(_mm256_loadu_pd(keys.data() + k), f));
    }
    for (; k < n; ++k) out[k] = keys[k] * factor;
}

std::size_t masked_argmax(Mask row, std::span<const double> scores) {
    const std::size_t n = row.size();
    const __m256d neg_inf = _mm256_set1_pd(-__builtin_inf());
    __m256d best = neg_inf;
    bool any = false;
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d m = lane_mask(row.data() + k);
        any |= _mm256_movemask_pd(m) != 0;
        best = _mm256_max_pd(best, _mm256_blendv_pd(neg_inf, _mm256_loadu_pd(scores.data() + k), m));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double top = lanes[0];
    for (int j = 1; j < 4; ++j) top = lanes[j] > top ? lanes[j] : top;
    for (std::size_t t = k; t < n; ++t) {
        if (row[t] && (!any || scores[t] > top)) top = scores[t];
        any |= row[t] != 0;
    }
    if (!any) return n;
    for (std::size_t t = 0; t < n; ++t) {
        if (row[t] && scores[t] == top) return t;
    }
    return n;
}

}  // namespace

namespace detail {

const KernelTable& avx2_kernels() {
    static const KernelTable table{
        "avx2", mask_and, mask_or, mask_not, mask_count, masked_sum, compare_row, scale_row, masked_argmax,
    };
    return table;
}

}  // namespace detail
}  // namespace rasp::kernels
