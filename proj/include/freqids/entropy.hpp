#pragma once

// Differential-entropy model of per-packet feature sequences: closed-form
// information-loss expressions for min/max, average, variance and spectral
// features of an independent Gaussian process, plus a Monte-Carlo harness
// that checks the bounds with a nearest-neighbour entropy estimator.
// All values are in nats.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/fft.hpp"

namespace freqids {

/// K = sqrt(2*pi*e); a Gaussian with standard deviation sigma has entropy ln(K*sigma).
inline const double kEntropyK = std::sqrt(2.0 * std::numbers::pi * std::numbers::e);

struct GaussianProcessSpec {
  std::vector<double> mean;   // u(i); empty means zero mean
  std::vector<double> sigma;  // sigma(i)
  bool stationary = false;

  static GaussianProcessSpec stationary_zero_mean(std::size_t n, double sigma) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, sigma), true};
  }

  std::size_t size() const noexcept { return sigma.size(); }

  double mean_at(std::size_t i) const { return mean.empty() ? 0.0 : mean[i]; }
};

/// Enforces sigma(i) >= 1/K (non-negative entropy per sample).
inline void validate(const GaussianProcessSpec& spec) {
  if (spec.sigma.empty()) throw HypothesisViolation("process spec has no samples");
  if (!spec.mean.empty() && spec.mean.size() != spec.sigma.size()) {
    throw DimensionMismatch("process mean length", spec.sigma.size(), spec.mean.size());
  }
  const double floor = 1.0 / kEntropyK;
  for (double s : spec.sigma) {
    if (!(s > 0.0)) throw NonPositiveSigma();
    if (s < floor * (1.0 - 1e-12)) {
      throw HypothesisViolation("sigma " + std::to_string(s) + " below 1/K = " + std::to_string(floor));
    }
  }
}

inline void require_stationary(const GaussianProcessSpec& spec) {
  validate(spec);
  if (!spec.stationary) throw NonStationary();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.sigma[i] != spec.sigma[0] || spec.mean_at(i) != 0.0) throw NonStationary();
  }
}

inline double entropy_gaussian(double sigma) {
  if (!(sigma > 0.0)) throw NonPositiveSigma();
  return std::log(kEntropyK * sigma);
}

inline double packet_entropy(const GaussianProcessSpec& spec) {
  validate(spec);
  double h = 0.0;
  for (double s : spec.sigma) h += std::log(kEntropyK * s);
  return h;
}

namespace detail {

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double quadratic_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace detail

/// Min/max features: E[loss] >= (N-1) ln(K E[sigma]).
inline double loss_minmax_lower_bound(const GaussianProcessSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.size());
  return (n - 1.0) * std::log(kEntropyK * detail::mean_of(spec.sigma));
}

/// Average feature, expected loss: >= ln sqrt(N) + (N-1) ln(K E[sigma]).
inline double loss_avg_expected_lower_bound(const GaussianProcessSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.size());
  return 0.5 * std::log(n) + (n - 1.0) * std::log(kEntropyK * detail::mean_of(spec.sigma));
}

struct LossBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Average feature: ln N <= loss <= ln sqrt(N) + (N-1) ln(K Q(sigma)), Q the
/// quadratic mean of sigma.
inline LossBounds loss_avg_bounds(const GaussianProcessSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.size());
  return {std::log(n), 0.5 * std::log(n) + (n - 1.0) * std::log(kEntropyK * detail::quadratic_mean(spec.sigma))};
}

/// Average feature, exact: ln N + (N-1) ln K + sum ln sigma(i) - 0.5 ln sum sigma(i)^2.
inline double loss_avg_exact(const GaussianProcessSpec& spec) {
  validate(spec);
  const double n = static_cast<double>(spec.size());
  double log_prod = 0.0, sum_sq = 0.0;
  for (double s : spec.sigma) {
    log_prod += std::log(s);
    sum_sq += s * s;
  }
  return std::log(n) + (n - 1.0) * std::log(kEntropyK) + log_prod - 0.5 * std::log(sum_sq);
}

/// Variance feature estimate for a stationary zero-mean process:
/// N ln(K sigma) - ln(sqrt(4 pi N^3) / sigma^2).
inline double loss_variance(const GaussianProcessSpec& spec) {
  require_stationary(spec);
  const double n = static_cast<double>(spec.size());
  const double s = spec.sigma[0];
  return n * std::log(kEntropyK * s) - std::log(std::sqrt(4.0 * std::numbers::pi * n * n * n) / (s * s));
}

/// Spectral feature estimate (log transform ignored):
/// N ln((sigma / w^2) sqrt(pi / 2e)) - N ln N.
inline double loss_spectral(const GaussianProcessSpec& spec, double weight) {
  require_stationary(spec);
  if (!(weight > 0.0)) throw Error("encoding weight must be positive");
  const double n = static_cast<double>(spec.size());
  const double s = spec.sigma[0];
  return n * std::log(s / (weight * weight) * std::sqrt(std::numbers::pi / (2.0 * std::numbers::e))) - n * std::log(n);
}

/// Reduction over the average feature: N ln(2e w^2 N) + ln(sqrt(N) / (K sigma)).
inline double spectral_reduction_vs_avg(const GaussianProcessSpec& spec, double weight) {
  require_stationary(spec);
  const double n = static_cast<double>(spec.size());
  const double s = spec.sigma[0];
  return n * std::log(2.0 * std::numbers::e * weight * weight * n) + std::log(std::sqrt(n) / (kEntropyK * s));
}

/// Reduction over min/max features: N ln(2e w^2 N) - ln(K sigma).
inline double spectral_reduction_vs_minmax(const GaussianProcessSpec& spec, double weight) {
  require_stationary(spec);
  const double n = static_cast<double>(spec.size());
  return n * std::log(2.0 * std::numbers::e * weight * weight * n) - std::log(kEntropyK * spec.sigma[0]);
}

/// Reduction over the variance feature: N ln(2e w^2 N) - ln(sqrt(4 pi N^3) / sigma^2).
inline double spectral_reduction_vs_variance(const GaussianProcessSpec& spec, double weight) {
  require_stationary(spec);
  const double n = static_cast<double>(spec.size());
  const double s = spec.sigma[0];
  return n * std::log(2.0 * std::numbers::e * weight * weight * n) -
         std::log(std::sqrt(4.0 * std::numbers::pi * n * n * n) / (s * s));
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimation

struct EntropyEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

struct EstimatorOptions {
  std::size_t bootstrap_rounds = 200;
  std::uint64_t seed = 1;
};

/// First-nearest-neighbour (Kozachenko-Leonenko) estimate for 1-D samples:
/// H = psi(n) - psi(1) + ln 2 + mean(ln rho_i). The standard error is a
/// bootstrap over the per-sample log-distance terms. Coincident values use the
/// distance to the nearest distinct value.
inline EntropyEstimate kl_entropy_1d(std::vector<double> samples, const EstimatorOptions& opts = {}) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error("entropy estimator needs at least two samples");
  std::sort(samples.begin(), samples.end());
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double rho = std::numeric_limits<double>::infinity();
    for (std::size_t j = i; j-- > 0;) {
      if (samples[j] != samples[i]) {
        rho = std::min(rho, samples[i] - samples[j]);
        break;
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (samples[j] != samples[i]) {
        rho = std::min(rho, samples[j] - samples[i]);
        break;
      }
    }
    if (!std::isfinite(rho)) throw Error("entropy estimator: all samples identical");
    terms[i] = std::log(rho);
  }
  double harmonic = 0.0;  // psi(n) - psi(1)
  for (std::size_t k = 1; k < n; ++k) harmonic += 1.0 / static_cast<double>(k);
  const double offset = harmonic + std::numbers::ln2;
  double mean = 0.0;
  for (double t : terms) mean += t;
  mean /= static_cast<double>(n);

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < opts.bootstrap_rounds; ++b) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += terms[pick(rng)];
    m /= static_cast<double>(n);
    s1 += m;
    s2 += m * m;
  }
  const double rounds = static_cast<double>(std::max<std::size_t>(opts.bootstrap_rounds, 2));
  const double var = std::max(0.0, (s2 - s1 * s1 / rounds) / (rounds - 1.0));
  return {offset + mean, std::sqrt(var)};
}

using ScalarGenerator = std::function<double(std::mt19937_64&)>;

inline EntropyEstimate estimate_entropy_mc(const ScalarGenerator& generator, std::size_t n_samples,
                                           std::uint64_t seed, const EstimatorOptions& opts = {}) {
  if (n_samples < 1000) throw Error("estimate_entropy_mc: need at least 1000 samples");
  std::mt19937_64 rng(seed);
  std::vector<double> xs(n_samples);
  for (auto& x : xs) x = generator(rng);
  return kl_entropy_1d(std::move(xs), opts);
}

// ---------------------------------------------------------------------------
// Bound checks

/// One closed-form loss result and the Monte-Carlo check that goes with it.
enum class LossCheck {
  MinFeature,         // lower bound for the minimum feature
  AverageExpected,    // expected lower bound for the average feature
  AverageBounds,      // lower and upper bounds for the average feature
  Variance,           // asymptotic estimate for the variance feature
  SpectralChi2,       // spectral loss against a chi-square(2) spot check
  SpectralReduction,  // average loss minus spectral loss identity
};

inline constexpr std::array<LossCheck, 6> kAllLossChecks = {
    LossCheck::MinFeature, LossCheck::AverageExpected, LossCheck::AverageBounds,
    LossCheck::Variance,   LossCheck::SpectralChi2,    LossCheck::SpectralReduction};

inline const char* to_string(LossCheck c) {
  switch (c) {
    case LossCheck::MinFeature: return "min_feature";
    case LossCheck::AverageExpected: return "average_expected";
    case LossCheck::AverageBounds: return "average_bounds";
    case LossCheck::Variance: return "variance";
    case LossCheck::SpectralChi2: return "spectral_chi2";
    case LossCheck::SpectralReduction: return "spectral_reduction";
  }
  return "?";
}

enum class LossMethod { MinMax, Average, Variance, Spectral };

inline const char* to_string(LossMethod m) {
  switch (m) {
    case LossMethod::MinMax: return "minmax";
    case LossMethod::Average: return "average";
    case LossMethod::Variance: return "variance";
    case LossMethod::Spectral: return "spectral";
  }
  return "?";
}

struct LossReport {
  LossCheck check = LossCheck::MinFeature;
  LossMethod method = LossMethod::MinMax;
  double closed_form = 0.0;
  std::optional<double> upper_bound;
  std::optional<double> monte_carlo;
  double mc_stderr = 0.0;
  bool checked = false;  // false for estimates that carry no bound to test
  bool passed = true;
  std::string detail;
};

struct McBudget {
  std::size_t samples = 100000;
  std::uint64_t seed = 7;
  double weight = 10.0;  // encoding weight used by the spectral checks
  double sigmas = 3.0;   // tolerance, in standard errors
};

namespace detail {

inline std::vector<double> draw_process(const GaussianProcessSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> s(spec.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = spec.mean_at(i) + spec.sigma[i] * z(rng);
  return s;
}

inline EntropyEstimate feature_entropy(const GaussianProcessSpec& spec, const McBudget& budget,
                                       const std::function<double(const std::vector<double>&)>& feature) {
  return estimate_entropy_mc([&](std::mt19937_64& rng) { return feature(draw_process(spec, rng)); }, budget.samples,
                             budget.seed, EstimatorOptions{200, budget.seed + 1});
}

}  // namespace detail

/// Closed form for `check` plus, where meaningful, a Monte-Carlo estimate of
/// the same loss and a bound check at `budget.sigmas` standard errors.
inline LossReport verify_loss_bound(LossCheck check, const GaussianProcessSpec& spec, const McBudget& budget = {}) {
  validate(spec);
  LossReport rep;
  rep.check = check;
  const double h_packet = packet_entropy(spec);
  const double tol_sigmas = budget.sigmas;

  auto average = [](const std::vector<double>& s) {
    double a = 0.0;
    for (double x : s) a += x;
    return a / static_cast<double>(s.size());
  };

  switch (check) {
    case LossCheck::MinFeature: {
      rep.method = LossMethod::MinMax;
      rep.closed_form = loss_minmax_lower_bound(spec);
      auto est = detail::feature_entropy(spec, budget, [](const std::vector<double>& s) {
        return *std::min_element(s.begin(), s.end());
      });
      rep.monte_carlo = h_packet - est.estimate;
      rep.mc_stderr = est.std_error;
      rep.checked = true;
      rep.passed = *rep.monte_carlo >= rep.closed_form - tol_sigmas * rep.mc_stderr;
      rep.detail = "min-feature loss >= lower bound";
      break;
    }
    case LossCheck::AverageExpected: {
      rep.method = LossMethod::Average;
      rep.closed_form = loss_avg_expected_lower_bound(spec);
      auto est = detail::feature_entropy(spec, budget, average);
      rep.monte_carlo = h_packet - est.estimate;
      rep.mc_stderr = est.std_error;
      rep.checked = true;
      rep.passed = *rep.monte_carlo >= rep.closed_form - tol_sigmas * rep.mc_stderr;
      rep.detail = "average-feature loss >= expected lower bound";
      break;
    }
    case LossCheck::AverageBounds: {
      rep.method = LossMethod::Average;
      const auto b = loss_avg_bounds(spec);
      rep.closed_form = b.lower;
      rep.upper_bound = b.upper;
      auto est = detail::feature_entropy(spec, budget, average);
      rep.monte_carlo = h_packet - est.estimate;
      rep.mc_stderr = est.std_error;
      rep.checked = true;
      const double slack = tol_sigmas * rep.mc_stderr;
      rep.passed = *rep.monte_carlo >= b.lower - slack && *rep.monte_carlo <= b.upper + slack;
      rep.detail = "lower <= average-feature loss <= upper";
      break;
    }
    case LossCheck::Variance: {
      rep.method = LossMethod::Variance;
      rep.closed_form = loss_variance(spec);
      const double n = static_cast<double>(spec.size());
      auto est = detail::feature_entropy(spec, budget, [n](const std::vector<double>& s) {
        double v = 0.0;
        for (double x : s) v += x * x;
        return v / n;
      });
      rep.monte_carlo = h_packet - est.estimate;
      rep.mc_stderr = est.std_error;
      rep.detail = "asymptotic estimate; reported, not checked";
      break;
    }
    case LossCheck::SpectralChi2: {
      rep.method = LossMethod::Spectral;
      rep.closed_form = loss_spectral(spec, budget.weight);
      // Spot check of the chi-square(2) entropy the estimate rests on, using a
      // short frame: for a non-DC, non-Nyquist bin of white Gaussian input,
      // 2|F_k|^2 / (L sigma^2) ~ chi2(2).
      const std::size_t len = std::min<std::size_t>(spec.size(), 16);
      if (len < 3) throw HypothesisViolation("spectral spot check needs N >= 3");
      const double sigma = spec.sigma[0];
      const FftPlan plan(len);
      auto est = estimate_entropy_mc(
          [&](std::mt19937_64& rng) {
            std::normal_distribution<double> z(0.0, sigma);
            std::vector<double> frame(len);
            for (double& x : frame) x = z(rng);
            std::vector<std::complex<double>> out(len);
            plan.execute(std::span<const double>(frame), std::span<std::complex<double>>(out));
            return 2.0 * std::norm(out[1]) / (static_cast<double>(len) * sigma * sigma);
          },
          budget.samples, budget.seed, EstimatorOptions{200, budget.seed + 1});
      const double n = static_cast<double>(spec.size());
      const double w = budget.weight;
      rep.monte_carlo = h_packet - n * std::log(n * w * w) - n * est.estimate;
      rep.mc_stderr = n * est.std_error;
      rep.checked = true;
      rep.passed = std::abs(*rep.monte_carlo - rep.closed_form) <= tol_sigmas * rep.mc_stderr;
      rep.detail = "chi2(2) spectral entropy spot check";
      break;
    }
    case LossCheck::SpectralReduction: {
      rep.method = LossMethod::Spectral;
      rep.closed_form = spectral_reduction_vs_avg(spec, budget.weight);
      const double lhs = loss_avg_exact(spec) - loss_spectral(spec, budget.weight);
      rep.checked = true;
      rep.passed = std::abs(lhs - rep.closed_form) <= 1e-6;
      rep.detail = "avg loss - spectral loss == reduction (difference " + std::to_string(lhs - rep.closed_form) + ")";
      break;
    }
  }
  return rep;
}

}  // namespace freqids
