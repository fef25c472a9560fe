#pragma once

// RAII wrappers for FFTW buffers and plans.

#include <fftw3.h>

#include <cstddef>
#include <memory>

namespace haar::detail {

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

struct Plan {
  fftw_plan p = nullptr;
  explicit Plan(fftw_plan q) : p(q) {}
  ~Plan() {
    if (p) fftw_destroy_plan(p);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

}  // namespace haar::detail
