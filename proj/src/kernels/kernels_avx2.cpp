// AVX2 variants, four double lanes per iteration. Compiled with -mavx2
// only (no FMA) so each lane performs exactly the scalar operation order.

#include <immintrin.h>

#include "regsmc/kernels.hpp"
#include "regsmc/kernels/scalar_ops.hpp"

namespace regsmc::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// 0 - v, not a sign flip, so that a zero control is +0 as in the scalar path.
inline __m256d neg_pd(__m256d v) {
  return _mm256_sub_pd(_mm256_setzero_pd(), v);
}

// gamma x1 + |x2| x2
inline __m256d numerator(__m256d x1, __m256d x2, __m256d gamma) {
  return _mm256_add_pd(_mm256_mul_pd(gamma, x1), _mm256_mul_pd(abs_pd(x2), x2));
}

template <SystemKind Kind>
inline __m256d control4(__m256d x1, __m256d x2, __m256d gamma, __m256d mu) {
  const __m256d num = numerator(x1, x2, gamma);
  const __m256d ax1 = abs_pd(x1);
  if constexpr (Kind == SystemKind::Original) {
    const __m256d u = neg_pd(_mm256_div_pd(num, ax1));
    const __m256d at_zero = _mm256_cmp_pd(x1, _mm256_setzero_pd(), _CMP_EQ_OQ);
    return _mm256_blendv_pd(u, _mm256_setzero_pd(), at_zero);
  } else if constexpr (Kind == SystemKind::MaxReg) {
    return neg_pd(_mm256_div_pd(num, _mm256_max_pd(mu, ax1)));
  } else {
    return neg_pd(_mm256_div_pd(num, _mm256_add_pd(ax1, mu)));
  }
}

template <SystemKind Kind>
void control_impl(std::span<const double> x1, std::span<const double> x2, double gamma,
                  double mu, std::span<double> u) {
  const std::size_t n = u.size();
  const __m256d g = _mm256_set1_pd(gamma);
  const __m256d m = _mm256_set1_pd(mu);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(x1.data() + i);
    const __m256d b = _mm256_loadu_pd(x2.data() + i);
    _mm256_storeu_pd(u.data() + i, control4<Kind>(a, b, g, m));
  }
  for (; i < n; ++i) u[i] = ops::control(Kind, x1[i], x2[i], gamma, mu);
}

void control(SystemKind kind, std::span<const double> x1, std::span<const double> x2,
             double gamma, double mu, std::span<double> u) {
  switch (kind) {
    case SystemKind::Original: control_impl<SystemKind::Original>(x1, x2, gamma, mu, u); break;
    case SystemKind::MaxReg: control_impl<SystemKind::MaxReg>(x1, x2, gamma, mu, u); break;
    case SystemKind::AddReg: control_impl<SystemKind::AddReg>(x1, x2, gamma, mu, u); break;
  }
}

template <SystemKind Kind>
void euler_impl(std::span<double> x1, std::span<double> x2, double d, double gamma, double mu,
                double dt, std::span<double> u) {
  const std::size_t n = u.size();
  const __m256d g = _mm256_set1_pd(gamma);
  const __m256d m = _mm256_set1_pd(mu);
  const __m256d h = _mm256_set1_pd(dt);
  const __m256d dv = _mm256_set1_pd(d);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(x1.data() + i);
    const __m256d b = _mm256_loadu_pd(x2.data() + i);
    const __m256d c = control4<Kind>(a, b, g, m);
    _mm256_storeu_pd(u.data() + i, c);
    _mm256_storeu_pd(x1.data() + i, _mm256_add_pd(a, _mm256_mul_pd(h, b)));
    _mm256_storeu_pd(x2.data() + i, _mm256_add_pd(b, _mm256_mul_pd(h, _mm256_add_pd(c, dv))));
  }
  for (; i < n; ++i) {
    const double a = x1[i];
    const double b = x2[i];
    const double c = ops::control(Kind, a, b, gamma, mu);
    u[i] = c;
    x1[i] = a + dt * b;
    x2[i] = b + dt * (c + d);
  }
}

void euler_step(SystemKind kind, std::span<double> x1, std::span<double> x2, double d,
                double gamma, double mu, double dt, std::span<double> u) {
  switch (kind) {
    case SystemKind::Original: euler_impl<SystemKind::Original>(x1, x2, d, gamma, mu, dt, u); break;
    case SystemKind::MaxReg: euler_impl<SystemKind::MaxReg>(x1, x2, d, gamma, mu, dt, u); break;
    case SystemKind::AddReg: euler_impl<SystemKind::AddReg>(x1, x2, d, gamma, mu, dt, u); break;
  }
}

void energy_maxreg(std::span<const double> x1, std::span<const double> x2, double gamma,
                   double mu, std::span<double> e) {
  const std::size_t n = e.size();
  const __m256d g = _mm256_set1_pd(gamma);
  const __m256d m = _mm256_set1_pd(mu);
  const __m256d two_mu = _mm256_set1_pd(2.0 * mu);
  const __m256d half_mu = _mm256_set1_pd(0.5 * mu);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d a = _mm256_loadu_pd(x1.data() + i);
    const __m256d b = _mm256_loadu_pd(x2.data() + i);
    const __m256d aa = abs_pd(a);
    const __m256d inner = _mm256_div_pd(_mm256_mul_pd(a, a), two_mu);
    const __m256d outer = _mm256_sub_pd(aa, half_mu);
    const __m256d z = _mm256_blendv_pd(outer, inner, _mm256_cmp_pd(aa, m, _CMP_LT_OQ));
    const __m256d en = _mm256_add_pd(_mm256_mul_pd(g, z), _mm256_mul_pd(half, _mm256_mul_pd(b, b)));
    _mm256_storeu_pd(e.data() + i, en);
  }
  for (; i < n; ++i) e[i] = ops::energy_maxreg(x1[i], x2[i], gamma, mu);
}

const KernelTable kTable{&control, &euler_step, &energy_maxreg};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace regsmc::kernels::avx2
