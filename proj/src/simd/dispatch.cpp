#include <cstdlib>
#include <string>

#include "haar/simd.hpp"

namespace haar::simd {

#if defined(HAAR_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(HAAR_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(HAAR_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(HAAR_HAVE_NEON)
  return &neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("HAAR_SIMD"); env != nullptr && std::string(env) == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace haar::simd
