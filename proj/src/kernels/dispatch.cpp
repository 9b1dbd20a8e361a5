#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "regsmc/kernels.hpp"

namespace regsmc::kernels {

#ifndef REGSMC_HAVE_AVX2
namespace avx2 {
const KernelTable& table() { throw std::logic_error("AVX2 kernels not compiled in"); }
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(REGSMC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("REGSMC_ISA")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && best == Isa::Avx2) return Isa::Avx2;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool avx2_compiled() {
#ifdef REGSMC_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

Isa detected_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) {
  if (isa == Isa::Avx2 && detected_isa() != Isa::Avx2) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

const KernelTable& active_table() {
  return active_isa() == Isa::Avx2 ? avx2::table() : scalar::table();
}

void control(SystemKind kind, std::span<const double> x1, std::span<const double> x2,
             double gamma, double mu, std::span<double> u) {
  if (x1.size() != u.size() || x2.size() != u.size()) {
    throw std::invalid_argument("kernels::control: span length mismatch");
  }
  active_table().control(kind, x1, x2, gamma, mu, u);
}

void euler_step(SystemKind kind, std::span<double> x1, std::span<double> x2, double d,
                double gamma, double mu, double dt, std::span<double> u) {
  if (x1.size() != u.size() || x2.size() != u.size()) {
    throw std::invalid_argument("kernels::euler_step: span length mismatch");
  }
  active_table().euler_step(kind, x1, x2, d, gamma, mu, dt, u);
}

void energy_maxreg(std::span<const double> x1, std::span<const double> x2, double gamma,
                   double mu, std::span<double> e) {
  if (x1.size() != e.size() || x2.size() != e.size()) {
    throw std::invalid_argument("kernels::energy_maxreg: span length mismatch");
  }
  active_table().energy_maxreg(x1, x2, gamma, mu, e);
}

}  // namespace regsmc::kernels
