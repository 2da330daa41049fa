#include "ouqm/kernels.hpp"

#include <cstdlib>

namespace ouqm::kernels {

const KernelTable* avx2_table_if_built(); // kernels_avx2.cpp

namespace {

bool avx2_usable() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_table_if_built() == nullptr) return false;
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* select() {
    if (std::getenv("OUQM_FORCE_SCALAR") != nullptr) return &scalar_table();
    if (avx2_usable()) return avx2_table_if_built();
    return &scalar_table();
}

} // namespace

const KernelTable& active() {
    static const KernelTable* chosen = select();
    return *chosen;
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> out{&scalar_table()};
    if (avx2_usable()) out.push_back(avx2_table_if_built());
    return out;
}

} // namespace ouqm::kernels
