#pragma once

// Test-side oracles, deliberately independent of the library under test:
// adaptive Simpson quadrature over the primitive prior/noise densities only.
// Closed forms from the library (posterior_mean etc.) are never called here.

#include <functional>
#include <string>
#include <vector>

namespace support {

struct primitive_model {
  double sigma0, sigma_a, sigma_b;

  double noise_sd(int observer) const { return observer == 0 ? sigma_a : sigma_b; }
  double other_noise_sd(int observer) const { return observer == 0 ? sigma_b : sigma_a; }
};

double std_normal_pdf(double z);
double std_normal_cdf(double z);  // handles +-inf

// Adaptive Simpson on [lo, hi], finite endpoints.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-12);

// E[x | s_a, s_b] by quadrature of x against prior(x) g_a(s_a|x) g_b(s_b|x).
double posterior_mean(const primitive_model& m, double s_a, double s_b);

// E[x | s_own] for observer 0 (player a) or 1 (player b).
double marginal_mean(const primitive_model& m, int observer, double s_own);

// E[x | s_own, s_other in [lo, hi]]; the opponent axis integrates in closed
// form through the noise CDF, leaving one quadrature over x.
double truncated_mean(const primitive_model& m, int observer, double s_own, double lo, double hi);

// P(s_other in [lo, hi] | s_own).
double type_probability(const primitive_model& m, int observer, double s_own, double lo,
                        double hi);

// Density of s_other at t given s_own, restricted to [lo, hi] and renormalized.
double conditional_density(const primitive_model& m, int observer, double s_own, double t,
                           double lo, double hi);

// --- subprocess + filesystem helpers for CLI-level tests ---

struct cli_result {
  int exit_code;
  std::string output;  // stdout and stderr interleaved
};

// Runs the binary at OBSLEARN_CLI with the given arguments. Fails the calling
// test via exception if the environment variable is missing.
cli_result run_cli(const std::vector<std::string>& args);

std::string cli_path();

// Fresh unique directory under the system temp root.
std::string make_temp_dir(const std::string& hint);

std::string slurp(const std::string& path);
void spit(const std::string& path, const std::string& content);
bool file_exists(const std::string& path);

// --- frozen reference values ---
//
// Pinned from an independent high-precision prototype (scipy quad/brentq,
// tolerances 1e-13..1e-14); 17 significant digits. Tests compare the engine
// against these at 1e-9..1e-10, far above the generator's own error.
namespace frozen {

// symmetric unit model (1, 1, 1)
inline constexpr double kUnitThresholdHalfLine = -0.8394286945571722;    // root of E(m, [0,inf))
inline constexpr double kX2ThresholdHalfLine = -1.6788573891143443;      // same in the (2,2,2) model
inline constexpr double kUnitMeanAtX2Cutoff = -0.31712328231002285;      // E(2*root, [0,inf)) in (1,1,1)

// asymmetric model (1, 1, 2)
inline constexpr double kAsymMa = -0.4052531689103816;
inline constexpr double kAsymMb = 3.4251690913197361;
inline constexpr double kAsymEMaMb = 0.20046182396424553;  // e(m_a, m_b), the asymmetry witness
inline constexpr double kAsymMaPrime = -0.8562922728299327;
inline constexpr double kAsymMbPrime = 1.6210126756415293;
inline constexpr double kAsymR1 = -0.3371628592635697;
inline constexpr double kAsymS1 = 0.79951543663873925;
inline constexpr double kAsymR2 = -0.45901386484168932;
inline constexpr double kAsymS2 = 1.4842585341434344;
inline constexpr int kAsymK = 2;
inline constexpr double kAsymQAtMa = 0.043618211447706723;
inline constexpr double kAsymQPrimeAtMa = 0.36183318915381318;

// asymmetric pipeline at delta = 0.95, horizon K+5, epsilon = 0.01
inline constexpr double kAsymGapEps2 = 0.17185499662858089;
inline constexpr double kAsymBoundEps2 = 0.21171189706974403;
inline constexpr double kAsymPiEps2 = 0.009269817299385294;
inline constexpr double kAsymDeltaGainEps2 = 0.70821419806677932;
inline constexpr double kAsymQEps2 = 0.043400781246556996;
inline constexpr double kAsymQPrimeEps2 = 0.361421910224557;

// same pipeline, epsilon = 1e-3 and 1e-4
inline constexpr double kAsymGapEps3 = 0.1940785880768805;
inline constexpr double kAsymBoundEps3 = 0.23161743767128165;
inline constexpr double kAsymPiEps3 = 0.00092700611955563229;
inline constexpr double kAsymDeltaGainEps3 = 0.74466089205577879;
inline constexpr double kAsymGapEps4 = 0.19630175005107914;
inline constexpr double kAsymBoundEps4 = 0.2336090328948178;
inline constexpr double kAsymDeltaGainEps4 = 0.74830556397833192;

}  // namespace frozen

}  // namespace support
