#include <atomic>
#include <cstdlib>
#include <string>

#include "kernel_registry.hpp"
#include "mosgnn/error.hpp"
#include "mosgnn/kernels/kernels.hpp"

namespace mosgnn::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(MOSGNN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend best_available() {
  if (available(Backend::Avx2)) return Backend::Avx2;
  if (available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

Backend initial_backend() {
  if (const char* env = std::getenv("MOSGNN_KERNELS"); env != nullptr && *env != '\0') {
    const Backend b = parse_backend(env);
    if (!available(b)) {
      throw ParameterError(std::string("MOSGNN_KERNELS=") + env + " not available on this CPU");
    }
    return b;
  }
  return best_available();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(initial_backend())};
  return table;
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(MOSGNN_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &detail::avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(MOSGNN_HAVE_NEON)
  return &detail::neon_table_unchecked();
#else
  return nullptr;
#endif
}

bool available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return avx2_table() != nullptr;
    case Backend::Neon:
      return neon_table() != nullptr;
  }
  return false;
}

const KernelTable& table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return scalar_table();
    case Backend::Avx2:
      if (const auto* t = avx2_table()) return *t;
      break;
    case Backend::Neon:
      if (const auto* t = neon_table()) return *t;
      break;
  }
  throw ParameterError("kernel backend not available on this CPU");
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select_backend(Backend b) { current().store(&table_for(b), std::memory_order_release); }

Backend parse_backend(std::string_view name) {
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  throw ParameterError("unknown kernel backend '" + std::string(name) + "'");
}

ScopedBackend::ScopedBackend(Backend b) : previous_(active().backend) { select_backend(b); }
ScopedBackend::~ScopedBackend() { select_backend(previous_); }

}  // namespace mosgnn::kernels
