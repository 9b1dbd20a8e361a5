#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regsmc/dynamics.hpp"
#include "regsmc/sim.hpp"
#include "regsmc/types.hpp"

namespace regsmc {

/// Scalar Lyapunov candidates of the regularized closed loops.
enum class LyapunovKind {
  EnergyE,     // gamma z(x1) + x2^2/2
  LogW,        // ln(1 + E)
  OuterV,      // gamma|x1| + x2^2/2 + eps sqrt|x1| sign(x1) x2
  LocalInner,  // (gamma/mu) x1^2/2 + x2^2/2, for the |x1| < mu subsystem
  LocalW,      // local ISS-Lyapunov function of the |x1| < mu subsystem
  TildeV,      // OuterV with |x1| replaced by z(x1)
  AltEnergy,   // energy of the additive regularization
};

std::string_view to_string(LyapunovKind kind);

struct CertificateConfig {
  double eps = 1.0 / 3.0;  // OuterV / TildeV cross term, in (0, sqrt(2 gamma))
  double eps1 = 0.0;       // LocalW Young parameters; kappa(eps1, eps2) must be > 0
  double eps2 = 0.0;
  double margin = 0.5;     // target kappa used by select_epsilons
};

/// Throws std::invalid_argument when cfg is outside the admissible set for kind.
void validate(const CertificateConfig& cfg, LyapunovKind kind, const SystemParams& p);

/// The closed loop whose trajectories a kind certifies.
SystemKind paired_system(LyapunovKind kind);

/// z(x1) = int_0^x1 s / max{mu, |s|} ds: x1^2/(2 mu) inside the band, |x1| - mu/2 outside.
double z_integral(double x1, double mu);
/// dz/dx1 = x1 / max{mu, |x1|}.
double z_slope(double x1, double mu);

/// Unchecked OuterV; positive definite only for 0 < eps < sqrt(2 gamma).
double outer_v(State s, double gamma, double eps);

double evaluate(LyapunovKind kind, State s, const SystemParams& p, const CertificateConfig& cfg = {});

/// Gradient for the smooth kinds (EnergyE, LogW, LocalInner, LocalW, AltEnergy).
std::array<double, 2> gradient(LyapunovKind kind, State s, const SystemParams& p,
                               const CertificateConfig& cfg = {});

/// Closed-form time derivative along the paired closed loop (LocalInner: the
/// |x1| < mu subsystem). Defined for EnergyE, LogW, LocalInner, AltEnergy.
double analytic_rate(LyapunovKind kind, State s, const SystemParams& p, double d,
                     const CertificateConfig& cfg = {});

/// 1 - (gamma/mu + 1) 3/(4 eps1^(4/3)) - (1/mu) 3/(4 eps2^(4/3)).
double kappa(const SystemParams& p, double eps1, double eps2);

/// Smallest (eps1, eps2) with each subtracted kappa term equal to
/// (1 - target)/2, so kappa(result) == target.
std::pair<double, double> select_epsilons(const SystemParams& p, double target_kappa);

/// Inner (|x1| < mu) dynamics: dx2 = -(gamma/mu) x1 - |x2| x2 / mu + d.
Derivative inner_vector_field(State s, const SystemParams& p, double d);
/// h = (gamma/mu) x1 + x2.
double local_h(State s, const SystemParams& p);
/// Central secant (W(x + tau f) - W(x - tau f)) / (2 tau) for LocalW along
/// f, evaluated without cancellation between the large terms of W.
double local_w_secant(State s, Derivative f, double tau, const SystemParams& p,
                      const CertificateConfig& cfg);
/// Disturbance coefficient b(x) in the LocalW rate bound.
double local_b(State s, const SystemParams& p, const CertificateConfig& cfg);

enum class GainRule { Regularized, OriginalEps, OriginalFixedEps };

struct GainCheck {
  bool passed = false;
  double threshold = 0.0;
};

/// gamma > threshold(D):
///   Regularized:      max{4, 2D + 4 sqrt(2) D^1.5}
///   OriginalEps:      1/2 + D + 2/(3 eps) D^1.5
///   OriginalFixedEps: 1/2 + D + 2 D^1.5
GainCheck gain_condition(double gamma, double D, GainRule rule, double eps = 1.0 / 3.0);

/// Terms k(x1) and e(x1, D) of the TildeV derivative estimate, evaluated
/// branch-wise (|x1| < mu uses the inner branch).
struct ProofTerms {
  double k = 0.0;
  double e = 0.0;
};
ProofTerms proof_bound_terms(double x1, const SystemParams& p, double D, double eps = 1.0 / 3.0);

namespace proof {
double k_inner(double x1, const SystemParams& p);
double k_outer(double x1, const SystemParams& p);
double e_inner(double x1, const SystemParams& p, double D, double eps);
double e_outer(double x1, const SystemParams& p, double D, double eps);
}  // namespace proof

// Verification ------------------------------------------------------------

/// One named check. worst_margin is max(lhs - rhs) over samples, so a
/// satisfied inequality has worst_margin <= 0 (or <= its tolerance).
struct CheckReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;
  bool passed = true;
};

/// `name samples=N worst_margin=M PASS|FAIL`
std::string format_report_line(const CheckReport& r);

struct DissipationOptions {
  double tol = 1e-9;             // absolute, per step
  double euler_allowance = 10.0; // per-step slack is euler_allowance * dt
};

/// Forward-difference check of V(x_{k+1}) - V(x_k) <= dt * bound(x_k, d_k)
/// + euler_allowance * dt + tol along a trajectory of `system`, where bound
/// is |x2||d| for the energies and |d|/sqrt(2) for LogW. Throws
/// std::invalid_argument on a mismatched system/kind pairing or a kind
/// without a dissipation inequality.
CheckReport check_dissipation(const Trajectory& traj, SystemKind system, LyapunovKind kind,
                              const SystemParams& p, const CertificateConfig& cfg = {},
                              const DissipationOptions& opt = {});

/// Sampling: half uniform on [-box, box]^2, half on a log-uniform shell
/// around the origin with radius in [1e-8, 1]. Deterministic per seed.
std::vector<State> sample_states(std::size_t n, std::uint64_t seed, double box = 2.0);
/// States with |x1| < mu (uniform and log-uniform in x1), x2 as above.
std::vector<State> sample_band_states(std::size_t n, std::uint64_t seed, double mu, double box = 2.0);
/// Disturbance values uniform in [-D, D].
std::vector<double> sample_disturbances(std::size_t n, std::uint64_t seed, double D);

CheckReport check_positive_definite(LyapunovKind kind, const SystemParams& p,
                                    const CertificateConfig& cfg, std::size_t n, std::uint64_t seed);

/// A state where OuterV < 0, if the sampler finds one.
std::optional<State> find_outer_v_negative(double gamma, double eps, std::size_t n, std::uint64_t seed);

/// |OuterV - [r, x2] M [r, x2]^T| with r = sqrt|x1| sign(x1), M = [[gamma, eps/2], [eps/2, 1/2]].
CheckReport check_quadratic_form(const SystemParams& p, double eps, std::size_t n,
                                 std::uint64_t seed, double tol = 1e-9);

/// z continuity and slope match at |x1| = mu, and z(x1) <= |x1| on samples.
CheckReport check_z_properties(double mu, std::size_t n, std::uint64_t seed);

/// Analytic LogW rate against |d|/sqrt(2) on sampled (state, d) with |d| <= D.
CheckReport check_logw_dissipation(const SystemParams& p, double D, std::size_t n,
                                   std::uint64_t seed, double tol = 1e-12);

/// Finite-difference LocalW rate along the inner dynamics against
/// -(1/mu)|x2|x2^2 - kappa h^4 + |b(x)||d| on band samples with |d| <= D.
CheckReport check_local_w_rate(const SystemParams& p, const CertificateConfig& cfg, double D,
                               std::size_t n, std::uint64_t seed);

}  // namespace regsmc
