#pragma once

#include "mosgnn/kernels/kernels.hpp"

// Tables defined in ISA-specific translation units. Callers must check CPU
// support before touching them.
namespace mosgnn::kernels::detail {
#if defined(MOSGNN_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(MOSGNN_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif
}  // namespace mosgnn::kernels::detail
