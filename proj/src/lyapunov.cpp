#include "regsmc/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "regsmc/kernels/scalar_ops.hpp"

namespace regsmc {
namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// r - log(1 + r), accurate for small r.
double r_minus_log1p(double r) {
  if (r < 1e-4) return r * r * (0.5 - r * (1.0 / 3.0 - r * 0.25));
  return r - std::log1p(r);
}

double inner_energy(State s, const SystemParams& p) {
  return 0.5 * (p.gamma / p.mu) * s.x1 * s.x1 + 0.5 * s.x2 * s.x2;
}

constexpr double kLocalWRateRelTol = 1e-9;

struct LocalWCoefficients {
  double c15;  // coefficient of E^1.5
  double c35;  // coefficient of E^3.5
};

LocalWCoefficients local_w_coefficients(const SystemParams& p, const CertificateConfig& cfg) {
  const double e1_4 = std::pow(cfg.eps1, 4);
  const double e2_4 = std::pow(cfg.eps2, 4);
  return {(p.mu / 3.0) * (p.gamma / p.mu + 1.0) * e1_4, (2.0 * std::numbers::sqrt2 / 7.0) * e2_4};
}

}  // namespace

std::string_view to_string(LyapunovKind kind) {
  switch (kind) {
    case LyapunovKind::EnergyE: return "EnergyE";
    case LyapunovKind::LogW: return "LogW";
    case LyapunovKind::OuterV: return "OuterV";
    case LyapunovKind::LocalInner: return "LocalInner";
    case LyapunovKind::LocalW: return "LocalW";
    case LyapunovKind::TildeV: return "TildeV";
    case LyapunovKind::AltEnergy: return "AltEnergy";
  }
  return "unknown";
}

void validate(const CertificateConfig& cfg, LyapunovKind kind, const SystemParams& p) {
  validate(p, SystemKind::MaxReg);
  switch (kind) {
    case LyapunovKind::OuterV:
    case LyapunovKind::TildeV:
      if (!(cfg.eps > 0.0 && cfg.eps < std::sqrt(2.0 * p.gamma))) {
        throw std::invalid_argument("eps must lie in (0, sqrt(2 gamma))");
      }
      break;
    case LyapunovKind::LocalW:
      if (!(cfg.eps1 > 0.0 && cfg.eps2 > 0.0)) {
        throw std::invalid_argument("eps1 and eps2 must be > 0");
      }
      if (!(kappa(p, cfg.eps1, cfg.eps2) > 0.0)) {
        throw std::invalid_argument("kappa(eps1, eps2) must be > 0");
      }
      break;
    default: break;
  }
}

SystemKind paired_system(LyapunovKind kind) {
  switch (kind) {
    case LyapunovKind::OuterV: return SystemKind::Original;
    case LyapunovKind::AltEnergy: return SystemKind::AddReg;
    default: return SystemKind::MaxReg;
  }
}

double z_integral(double x1, double mu) { return ops::z_integral(x1, mu); }

double z_slope(double x1, double mu) { return x1 / std::max(mu, std::fabs(x1)); }

double outer_v(State s, double gamma, double eps) {
  const double a = std::fabs(s.x1);
  return gamma * a + 0.5 * s.x2 * s.x2 + eps * std::sqrt(a) * sign(s.x1) * s.x2;
}

double evaluate(LyapunovKind kind, State s, const SystemParams& p, const CertificateConfig& cfg) {
  if (!is_finite(s)) throw std::domain_error("state must be finite");
  validate(cfg, kind, p);
  switch (kind) {
    case LyapunovKind::EnergyE: return ops::energy_maxreg(s.x1, s.x2, p.gamma, p.mu);
    case LyapunovKind::LogW: return std::log1p(ops::energy_maxreg(s.x1, s.x2, p.gamma, p.mu));
    case LyapunovKind::OuterV: return outer_v(s, p.gamma, cfg.eps);
    case LyapunovKind::LocalInner: return inner_energy(s, p);
    case LyapunovKind::LocalW: {
      const double e = inner_energy(s, p);
      const double h = local_h(s, p);
      const auto c = local_w_coefficients(p, cfg);
      return e + 0.25 * h * h * h * h + c.c15 * std::pow(e, 1.5) + c.c35 * std::pow(e, 3.5);
    }
    case LyapunovKind::TildeV: {
      const double z = z_integral(s.x1, p.mu);
      return p.gamma * z + 0.5 * s.x2 * s.x2 + cfg.eps * std::sqrt(z) * sign(s.x1) * s.x2;
    }
    case LyapunovKind::AltEnergy: {
      const double a = std::fabs(s.x1);
      return p.gamma * p.mu * r_minus_log1p(a / p.mu) + 0.5 * s.x2 * s.x2;
    }
  }
  throw std::invalid_argument("unknown Lyapunov kind");
}

std::array<double, 2> gradient(LyapunovKind kind, State s, const SystemParams& p,
                               const CertificateConfig& cfg) {
  validate(cfg, kind, p);
  switch (kind) {
    case LyapunovKind::EnergyE: return {p.gamma * z_slope(s.x1, p.mu), s.x2};
    case LyapunovKind::LogW: {
      const double w = 1.0 + ops::energy_maxreg(s.x1, s.x2, p.gamma, p.mu);
      return {p.gamma * z_slope(s.x1, p.mu) / w, s.x2 / w};
    }
    case LyapunovKind::LocalInner: return {(p.gamma / p.mu) * s.x1, s.x2};
    case LyapunovKind::LocalW: {
      const double e = inner_energy(s, p);
      const double h = local_h(s, p);
      const auto c = local_w_coefficients(p, cfg);
      const double f = 1.0 + 1.5 * c.c15 * std::sqrt(e) + 3.5 * c.c35 * std::pow(e, 2.5);
      const double h3 = h * h * h;
      const double g = p.gamma / p.mu;
      return {f * g * s.x1 + h3 * g, f * s.x2 + h3};
    }
    case LyapunovKind::AltEnergy:
      return {p.gamma * s.x1 / (p.mu + std::fabs(s.x1)), s.x2};
    default: break;
  }
  throw std::invalid_argument(std::string("no gradient for ") + std::string(to_string(kind)));
}

double analytic_rate(LyapunovKind kind, State s, const SystemParams& p, double d,
                     const CertificateConfig& cfg) {
  validate(cfg, kind, p);
  const double damp = std::fabs(s.x2) * s.x2 * s.x2;
  switch (kind) {
    case LyapunovKind::EnergyE:
      return -damp / std::max(p.mu, std::fabs(s.x1)) + s.x2 * d;
    case LyapunovKind::LogW: {
      const double w = 1.0 + ops::energy_maxreg(s.x1, s.x2, p.gamma, p.mu);
      return -damp / (std::max(p.mu, std::fabs(s.x1)) * w) + s.x2 / w * d;
    }
    case LyapunovKind::LocalInner: return -damp / p.mu + s.x2 * d;
    case LyapunovKind::AltEnergy: return -damp / (p.mu + std::fabs(s.x1)) + s.x2 * d;
    default: break;
  }
  throw std::invalid_argument(std::string("no closed-form rate for ") +
                              std::string(to_string(kind)));
}

double kappa(const SystemParams& p, double eps1, double eps2) {
  return 1.0 - (p.gamma / p.mu + 1.0) * 3.0 / (4.0 * std::pow(eps1, 4.0 / 3.0)) -
         (1.0 / p.mu) * 3.0 / (4.0 * std::pow(eps2, 4.0 / 3.0));
}

std::pair<double, double> select_epsilons(const SystemParams& p, double target_kappa) {
  if (!(target_kappa > 0.0 && target_kappa < 1.0)) {
    throw std::invalid_argument("target kappa must lie in (0, 1)");
  }
  validate(p, SystemKind::MaxReg);
  const double share = 0.5 * (1.0 - target_kappa);
  const double eps1 = std::pow(3.0 * (p.gamma / p.mu + 1.0) / (4.0 * share), 0.75);
  const double eps2 = std::pow(3.0 / (4.0 * p.mu * share), 0.75);
  return {eps1, eps2};
}

Derivative inner_vector_field(State s, const SystemParams& p, double d) {
  return {s.x2, -(p.gamma / p.mu) * s.x1 - std::fabs(s.x2) * s.x2 / p.mu + d};
}

double local_w_secant(State s, Derivative dir, double tau, const SystemParams& p,
                      const CertificateConfig& cfg) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  // Each difference W(x + tau f) - W(x - tau f) is factored so that no two
  // large terms are subtracted: W reaches 1e13 for typical eps1.
  const double g = p.gamma / p.mu;
  const State sp{s.x1 + tau * dir.x1, s.x2 + tau * dir.x2};
  const State sm{s.x1 - tau * dir.x1, s.x2 - tau * dir.x2};
  // E is quadratic, so E(x+) - E(x-) = 2 tau grad E . f exactly.
  const double de = g * s.x1 * dir.x1 + s.x2 * dir.x2;
  const double hp = local_h(sp, p);
  const double hm = local_h(sm, p);
  const double dh = g * dir.x1 + dir.x2;
  const double u = std::sqrt(inner_energy(sp, p));
  const double v = std::sqrt(inner_energy(sm, p));
  double p15 = 0.0;
  double p35 = 0.0;
  if (u + v > 0.0) {
    // u^n - v^n = (u - v) sum u^(n-1-k) v^k, u - v = (E+ - E-) / (u + v).
    p15 = de * (u * u + u * v + v * v) / (u + v);
    double sum = 0.0;
    double up = 1.0;
    for (int k = 0; k < 7; ++k) {
      sum += std::pow(u, 6 - k) * up;
      up *= v;
    }
    p35 = de * sum / (u + v);
  }
  const auto c = local_w_coefficients(p, cfg);
  return de + 0.25 * dh * (hp + hm) * (hp * hp + hm * hm) + c.c15 * p15 + c.c35 * p35;
}

double local_h(State s, const SystemParams& p) { return (p.gamma / p.mu) * s.x1 + s.x2; }

double local_b(State s, const SystemParams& p, const CertificateConfig& cfg) {
  const double e = inner_energy(s, p);
  const double h = local_h(s, p);
  const double e1_4 = std::pow(cfg.eps1, 4);
  const double e2_4 = std::pow(cfg.eps2, 4);
  return h * h * h + (1.0 + 0.5 * p.mu * (p.gamma / p.mu + 1.0) * e1_4 * std::sqrt(e) +
                      std::numbers::sqrt2 * e2_4 * std::pow(e, 2.5)) *
                         s.x2;
}

GainCheck gain_condition(double gamma, double D, GainRule rule, double eps) {
  if (!(D >= 0.0)) throw std::invalid_argument("D must be >= 0");
  double threshold = 0.0;
  switch (rule) {
    case GainRule::Regularized:
      threshold = std::max(4.0, 2.0 * D + 4.0 * std::numbers::sqrt2 * std::pow(D, 1.5));
      break;
    case GainRule::OriginalEps:
      if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
      threshold = 0.5 + D + 2.0 / (3.0 * eps) * std::pow(D, 1.5);
      break;
    case GainRule::OriginalFixedEps:
      threshold = 0.5 + D + 2.0 * std::pow(D, 1.5);
      break;
  }
  return {gamma > threshold, threshold};
}

namespace proof {

double k_inner(double x1, const SystemParams& p) {
  const double r = std::sqrt(2.0 * p.mu);
  return p.gamma / (r * r * r) * x1 * x1 - r;
}

double k_outer(double x1, const SystemParams& p) {
  const double a = std::fabs(x1);
  const double sz = std::sqrt(a - 0.5 * p.mu);
  const double q = a / sz;
  return (p.gamma * sz * a - q * q * q) / (2.0 * a);
}

double e_inner(double x1, const SystemParams& p, double D, double eps) {
  const double sz = std::sqrt(x1 * x1 / (2.0 * p.mu));
  return 0.5 * p.gamma * std::fabs(x1) / p.mu * sz - sz * D -
         2.0 * std::sqrt(p.mu) / (3.0 * eps) * std::pow(D, 1.5);
}

double e_outer(double x1, const SystemParams& p, double D, double eps) {
  const double a = std::fabs(x1);
  const double sz = std::sqrt(a - 0.5 * p.mu);
  return sz * (0.5 * p.gamma - D - 2.0 * std::sqrt(a) / (3.0 * eps * sz) * std::pow(D, 1.5));
}

}  // namespace proof

ProofTerms proof_bound_terms(double x1, const SystemParams& p, double D, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  validate(p, SystemKind::MaxReg);
  if (std::fabs(x1) < p.mu) return {proof::k_inner(x1, p), proof::e_inner(x1, p, D, eps)};
  return {proof::k_outer(x1, p), proof::e_outer(x1, p, D, eps)};
}

// Verification ------------------------------------------------------------

std::string format_report_line(const CheckReport& r) {
  std::ostringstream os;
  os << r.name << " samples=" << r.samples << " worst_margin=" << r.worst_margin
     << (r.violations ? " violations=" + std::to_string(r.violations) : std::string())
     << (r.passed ? " PASS" : " FAIL");
  return os.str();
}

CheckReport check_dissipation(const Trajectory& traj, SystemKind system, LyapunovKind kind,
                              const SystemParams& p, const CertificateConfig& cfg,
                              const DissipationOptions& opt) {
  if (paired_system(kind) != system) {
    throw std::invalid_argument(std::string(to_string(kind)) + " does not certify the " +
                                std::string(to_string(system)) + " closed loop");
  }
  const bool logw = kind == LyapunovKind::LogW;
  if (!(kind == LyapunovKind::EnergyE || logw || kind == LyapunovKind::AltEnergy ||
        kind == LyapunovKind::LocalInner)) {
    throw std::invalid_argument(std::string("no dissipation inequality for ") +
                                std::string(to_string(kind)));
  }
  validate(cfg, kind, p);

  CheckReport r;
  r.name = std::string("dissipation/") + std::string(to_string(kind));
  r.worst_margin = -std::numeric_limits<double>::infinity();
  if (traj.size() < 2) {
    r.worst_margin = 0.0;
    return r;
  }
  const double dt = traj.dt;
  double v_prev = evaluate(kind, traj.state(0), p, cfg);
  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const State s = traj.state(k);
    const double v_next = evaluate(kind, traj.state(k + 1), p, cfg);
    const bool in_scope = kind != LyapunovKind::LocalInner ||
                          (std::fabs(s.x1) < p.mu && std::fabs(traj.x1[k + 1]) < p.mu);
    if (in_scope) {
      const double bound = logw ? std::fabs(traj.d[k]) / std::numbers::sqrt2
                                : std::fabs(s.x2) * std::fabs(traj.d[k]);
      const double margin = (v_next - v_prev) - dt * bound - opt.euler_allowance * dt - opt.tol;
      ++r.samples;
      r.worst_margin = std::max(r.worst_margin, margin);
      if (margin > 0.0) ++r.violations;
    }
    v_prev = v_next;
  }
  if (r.samples == 0) r.worst_margin = 0.0;
  r.passed = r.violations == 0;
  return r;
}

std::vector<State> sample_states(std::size_t n, std::uint64_t seed, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-box, box);
  std::uniform_real_distribution<double> expo(-8.0, 0.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<State> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 2 == 0) {
      out.push_back({uni(rng), uni(rng)});
    } else {
      const double r = std::pow(10.0, expo(rng));
      const double th = angle(rng);
      out.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return out;
}

std::vector<State> sample_band_states(std::size_t n, std::uint64_t seed, double mu, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> in_band(-mu, mu);
  std::uniform_real_distribution<double> uni(-box, box);
  std::uniform_real_distribution<double> expo(-8.0, 0.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<State> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x1 = 0.0;
    double x2 = 0.0;
    if (i % 2 == 0) {
      x1 = in_band(rng);
      x2 = uni(rng);
    } else {
      x1 = (coin(rng) ? 1.0 : -1.0) * mu * std::pow(10.0, expo(rng));
      x2 = (coin(rng) ? 1.0 : -1.0) * box * std::pow(10.0, expo(rng));
    }
    if (std::fabs(x1) >= mu) x1 = std::nextafter(mu, 0.0) * sign(x1);
    out.push_back({x1, x2});
  }
  return out;
}

std::vector<double> sample_disturbances(std::size_t n, std::uint64_t seed, double D) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-D, D);
  std::vector<double> out(n);
  for (auto& d : out) d = D > 0.0 ? uni(rng) : 0.0;
  return out;
}

CheckReport check_positive_definite(LyapunovKind kind, const SystemParams& p,
                                    const CertificateConfig& cfg, std::size_t n, std::uint64_t seed) {
  CheckReport r;
  r.name = std::string("positive_definite/") + std::string(to_string(kind));
  r.worst_margin = -std::numeric_limits<double>::infinity();
  const double at_origin = evaluate(kind, {0.0, 0.0}, p, cfg);
  if (at_origin != 0.0) ++r.violations;
  for (const State& s : sample_states(n, seed)) {
    if (s.x1 == 0.0 && s.x2 == 0.0) continue;
    const double v = evaluate(kind, s, p, cfg);
    ++r.samples;
    r.worst_margin = std::max(r.worst_margin, -v);
    if (!(v > 0.0)) ++r.violations;
  }
  r.worst_margin = std::max(r.worst_margin, std::fabs(at_origin));
  r.passed = r.violations == 0;
  return r;
}

std::optional<State> find_outer_v_negative(double gamma, double eps, std::size_t n,
                                           std::uint64_t seed) {
  for (const State& s : sample_states(n, seed)) {
    if (outer_v(s, gamma, eps) < 0.0) return s;
  }
  return std::nullopt;
}

CheckReport check_quadratic_form(const SystemParams& p, double eps, std::size_t n,
                                 std::uint64_t seed, double tol) {
  CheckReport r;
  r.name = "quadratic_form/OuterV";
  for (const State& s : sample_states(n, seed)) {
    const double q = std::sqrt(std::fabs(s.x1)) * sign(s.x1);
    const double form = p.gamma * q * q + 2.0 * (0.5 * eps) * q * s.x2 + 0.5 * s.x2 * s.x2;
    const double v = outer_v(s, p.gamma, eps);
    const double err = std::fabs(v - form) / std::max(1.0, std::fabs(v));
    ++r.samples;
    r.worst_margin = std::max(r.worst_margin, err - tol);
    if (err > tol) ++r.violations;
  }
  r.passed = r.violations == 0;
  return r;
}

CheckReport check_z_properties(double mu, std::size_t n, std::uint64_t seed) {
  CheckReport r;
  r.name = "z_integral/seam_and_bound";
  r.worst_margin = -std::numeric_limits<double>::infinity();
  auto note = [&r](double margin) {
    ++r.samples;
    r.worst_margin = std::max(r.worst_margin, margin);
    if (margin > 0.0) ++r.violations;
  };
  for (double sgn : {1.0, -1.0}) {
    const double x = sgn * mu;
    const double inner = x * x / (2.0 * mu);
    const double outer = std::fabs(x) - 0.5 * mu;
    note(std::fabs(inner - outer) - 1e-12);
    const double slope_inner = x / mu;
    const double slope_outer = sgn;
    note(std::fabs(slope_inner - slope_outer) - 1e-12);
  }
  for (const State& s : sample_states(n, seed)) {
    note(z_integral(s.x1, mu) - std::fabs(s.x1));
  }
  r.passed = r.violations == 0;
  return r;
}

CheckReport check_logw_dissipation(const SystemParams& p, double D, std::size_t n,
                                   std::uint64_t seed, double tol) {
  CheckReport r;
  r.name = "dissipation_sampled/LogW";
  r.worst_margin = -std::numeric_limits<double>::infinity();
  const auto states = sample_states(n, seed);
  const auto ds = sample_disturbances(n, seed ^ 0x9e3779b97f4a7c15ULL, D);
  for (std::size_t i = 0; i < n; ++i) {
    const double rate = analytic_rate(LyapunovKind::LogW, states[i], p, ds[i]);
    const double margin = rate - std::fabs(ds[i]) / std::numbers::sqrt2;
    ++r.samples;
    r.worst_margin = std::max(r.worst_margin, margin);
    if (margin > tol) ++r.violations;
  }
  r.passed = r.violations == 0;
  return r;
}

CheckReport check_local_w_rate(const SystemParams& p, const CertificateConfig& cfg, double D,
                               std::size_t n, std::uint64_t seed) {
  validate(cfg, LyapunovKind::LocalW, p);
  CheckReport r;
  r.name = "local_w_rate/LocalW";
  r.worst_margin = -std::numeric_limits<double>::infinity();
  const double kap = kappa(p, cfg.eps1, cfg.eps2);
  const auto states = sample_band_states(n, seed, p.mu);
  const auto ds = sample_disturbances(n, seed ^ 0x9e3779b97f4a7c15ULL, D);
  for (std::size_t i = 0; i < n; ++i) {
    const State s = states[i];
    const double d = ds[i];
    const Derivative f = inner_vector_field(s, p, d);
    const auto g = gradient(LyapunovKind::LocalW, s, p, cfg);
    // Central difference along the flow, step 1e-6 of the state scale.
    const double fnorm = std::hypot(f.x1, f.x2);
    const double xnorm = std::hypot(s.x1, s.x2);
    const double rate =
        fnorm > 0.0 ? local_w_secant(s, f, 1e-6 * std::max(xnorm, 1e-300) / fnorm, p, cfg) : 0.0;
    const double h = local_h(s, p);
    const double bound = -std::fabs(s.x2) * s.x2 * s.x2 / p.mu - kap * h * h * h * h +
                         std::fabs(local_b(s, p, cfg)) * std::fabs(d);
    // Relative to the largest term on either side.
    const double scale = std::fabs(g[0] * f.x1) + std::fabs(g[1] * f.x2) +
                         std::fabs(local_b(s, p, cfg) * d);
    const double tol = kLocalWRateRelTol * scale;
    const double margin = rate - bound;
    ++r.samples;
    r.worst_margin = std::max(r.worst_margin, margin - tol);
    if (margin > tol) ++r.violations;
  }
  r.passed = r.violations == 0;
  return r;
}

}  // namespace regsmc
