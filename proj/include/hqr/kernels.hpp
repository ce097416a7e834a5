#pragma once

#include <cstddef>
#include <string_view>

namespace hqr::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// sum_i c[i] * |1 - conj(a) z_i|^{-2s}, z_i = x[i] + i y[i].
///
/// Exponents with 2s a positive integer up to 64 take a pow-free path.
using MobiusSumFn = double (*)(const double* x, const double* y, const double* c,
                               std::size_t n, double ax, double ay, double s);

/// out[i] = |re[i] + i im[i]|
using ModulusFn = void (*)(const double* re, const double* im, double* out, std::size_t n);

/// out[i] = |a_re[i] + i a_im[i]| + |b_re[i] + i b_im[i]|
using ModulusSumFn = void (*)(const double* a_re, const double* a_im, const double* b_re,
                              const double* b_im, double* out, std::size_t n);

struct KernelTable {
  Isa isa;
  MobiusSumFn mobius_weighted_sum;
  ModulusFn modulus;
  ModulusSumFn modulus_sum;
};

bool isa_available(Isa isa);

/// Table for a specific instruction set; throws if it is unavailable.
const KernelTable& table_for(Isa isa);

/// Best available table. HQR_FORCE_SCALAR=1 in the environment pins the
/// scalar kernels. Selected once per process.
const KernelTable& active();

}  // namespace hqr::kernels
