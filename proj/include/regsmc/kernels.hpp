#pragma once

// Batched inner loops over independent lanes (states or scenarios).
//
// Every kernel has a scalar reference in regsmc::kernels::scalar and, when
// the build enables it, an AVX2 variant in regsmc::kernels::avx2. The
// top-level functions dispatch at runtime to the best variant the CPU
// supports. All variants are bit-identical: they use the same IEEE
// operation order (see scalar_ops.hpp) and the build disables FP
// contraction.

#include <cstddef>
#include <span>
#include <string_view>

#include "regsmc/types.hpp"

namespace regsmc::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True if the AVX2 translation unit was compiled into this build.
bool avx2_compiled();
/// Best variant usable on this machine.
Isa detected_isa();
/// Variant the dispatcher currently uses. Honors REGSMC_ISA=scalar|avx2.
Isa active_isa();
/// Forces a variant (tests, benchmarks). Requests for an unavailable
/// variant fall back to Scalar. Returns the variant actually selected.
Isa set_active_isa(Isa isa);

struct KernelTable {
  // u[i] = control(kind, x1[i], x2[i])
  void (*control)(SystemKind kind, std::span<const double> x1, std::span<const double> x2,
                  double gamma, double mu, std::span<double> u);
  // u[i] = control at the current state; then one explicit Euler step
  // with the shared disturbance d, in place.
  void (*euler_step)(SystemKind kind, std::span<double> x1, std::span<double> x2, double d,
                     double gamma, double mu, double dt, std::span<double> u);
  // e[i] = gamma z(x1[i]) + x2[i]^2 / 2
  void (*energy_maxreg)(std::span<const double> x1, std::span<const double> x2, double gamma,
                        double mu, std::span<double> e);
};

namespace scalar {
const KernelTable& table();
}
namespace avx2 {
/// Throws std::logic_error when the AVX2 variant was not compiled in.
const KernelTable& table();
}

const KernelTable& active_table();

// Dispatching entry points. Spans must have equal lengths.
void control(SystemKind kind, std::span<const double> x1, std::span<const double> x2,
             double gamma, double mu, std::span<double> u);
void euler_step(SystemKind kind, std::span<double> x1, std::span<double> x2, double d,
                double gamma, double mu, double dt, std::span<double> u);
void energy_maxreg(std::span<const double> x1, std::span<const double> x2, double gamma,
                   double mu, std::span<double> e);

}  // namespace regsmc::kernels
