#include "regsmc/kernels.hpp"
#include "regsmc/kernels/scalar_ops.hpp"

namespace regsmc::kernels::scalar {
namespace {

void control(SystemKind kind, std::span<const double> x1, std::span<const double> x2,
             double gamma, double mu, std::span<double> u) {
  const std::size_t n = u.size();
  switch (kind) {
    case SystemKind::Original:
      for (std::size_t i = 0; i < n; ++i) u[i] = ops::control_original(x1[i], x2[i], gamma);
      break;
    case SystemKind::MaxReg:
      for (std::size_t i = 0; i < n; ++i) u[i] = ops::control_maxreg(x1[i], x2[i], gamma, mu);
      break;
    case SystemKind::AddReg:
      for (std::size_t i = 0; i < n; ++i) u[i] = ops::control_addreg(x1[i], x2[i], gamma, mu);
      break;
  }
}

void euler_step(SystemKind kind, std::span<double> x1, std::span<double> x2, double d,
                double gamma, double mu, double dt, std::span<double> u) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x1[i];
    const double b = x2[i];
    const double c = ops::control(kind, a, b, gamma, mu);
    u[i] = c;
    x1[i] = a + dt * b;
    x2[i] = b + dt * (c + d);
  }
}

void energy_maxreg(std::span<const double> x1, std::span<const double> x2, double gamma,
                   double mu, std::span<double> e) {
  const std::size_t n = e.size();
  for (std::size_t i = 0; i < n; ++i) e[i] = ops::energy_maxreg(x1[i], x2[i], gamma, mu);
}

const KernelTable kTable{&control, &euler_step, &energy_maxreg};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace regsmc::kernels::scalar
