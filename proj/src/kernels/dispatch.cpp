#include "weldcreep/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace weldcreep::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::avx512: return "avx512";
  }
  return "?";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#ifdef WELDCREEP_BUILD_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::avx512:
#ifdef WELDCREEP_BUILD_AVX512
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("kernel variant not available: " + std::string(isa_name(isa)));
  switch (isa) {
#ifdef WELDCREEP_BUILD_AVX512
    case Isa::avx512: return detail::avx512_table;
#endif
#ifdef WELDCREEP_BUILD_AVX2
    case Isa::avx2: return detail::avx2_table;
#endif
    default: return detail::scalar_table;
  }
}

namespace {

const KernelTable* best() {
  for (Isa isa : {Isa::avx512, Isa::avx2}) {
    if (supported(isa)) return &table(isa);
  }
  return &detail::scalar_table;
}

std::atomic<const KernelTable*> pinned{nullptr};

}  // namespace

const KernelTable& active() {
  if (const KernelTable* t = pinned.load(std::memory_order_acquire)) return *t;
  static const KernelTable* const automatic = best();
  return *automatic;
}

void force(std::optional<Isa> isa) { pinned.store(isa ? &table(*isa) : nullptr, std::memory_order_release); }

}  // namespace weldcreep::kernels
