#include <cstdlib>
#include <cstring>

#include "hqr/core.hpp"
#include "hqr/kernels.hpp"
#include "impl.hpp"

namespace hqr::kernels {
namespace {

const KernelTable kScalar{Isa::Scalar, &scalar::mobius_weighted_sum, &scalar::modulus,
                          &scalar::modulus_sum};
#if defined(HQR_HAVE_AVX2)
const KernelTable kAvx2{Isa::Avx2, &avx2::mobius_weighted_sum, &avx2::modulus, &avx2::modulus_sum};
#endif
#if defined(HQR_HAVE_NEON)
const KernelTable kNeon{Isa::Neon, &neon::mobius_weighted_sum, &neon::modulus, &neon::modulus_sum};
#endif

bool env_forces_scalar() {
  const char* v = std::getenv("HQR_FORCE_SCALAR");
  return v != nullptr && *v != '\0' && std::strcmp(v, "0") != 0;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(HQR_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(HQR_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    fail(ErrorKind::InvalidParameter, std::string("kernel set not available: ") +
                                          std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(HQR_HAVE_AVX2)
    case Isa::Avx2: return kAvx2;
#endif
#if defined(HQR_HAVE_NEON)
    case Isa::Neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& t = [] () -> const KernelTable& {
    if (env_forces_scalar()) return kScalar;
    if (isa_available(Isa::Avx2)) return table_for(Isa::Avx2);
    if (isa_available(Isa::Neon)) return table_for(Isa::Neon);
    return kScalar;
  }();
  return t;
}

}  // namespace hqr::kernels
