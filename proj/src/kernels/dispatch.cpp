#include <cstdlib>
#include <string_view>

#include "rasp/kernels.hpp"

namespace rasp::kernels {

#if defined(RASP_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_kernels();
}
#endif

const KernelTable* avx2_table() {
#if defined(RASP_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &detail::avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable* chosen = [] {
        const char* forced = std::getenv("RASP_KERNELS");
        if (forced && std::string_view(forced) == "scalar") return &scalar_table();
        const KernelTable* simd = avx2_table();
        return simd ? simd : &scalar_table();
    }();
    return *chosen;
}

}  // namespace rasp::kernels
