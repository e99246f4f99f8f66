#include "regkit/kernels.hpp"

namespace regkit::kernels {

// Defined in kernels_avx2.cpp (nullptr when that TU was built without AVX2).
const Ops* avx2_ops_impl();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* select_active() {
    if (cpu_has_avx2()) {
        if (const Ops* t = avx2_ops_impl()) return t;
    }
    return &scalar_ops();
}

} // namespace

const Ops* avx2_ops() {
    static const Ops* t = cpu_has_avx2() ? avx2_ops_impl() : nullptr;
    return t;
}

const Ops& active_ops() {
    static const Ops* t = select_active();
    return *t;
}

} // namespace regkit::kernels
