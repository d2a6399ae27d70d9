#include <cmath>
#include <stdexcept>
#include <vector>

#include "axsim/physics.hpp"

namespace axsim {
namespace {

constexpr double kSeriesLimit = 15.0;

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!), accumulated in long double.
double series_j(int n, double x) {
  const long double half = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / static_cast<long double>(i);
  if (term == 0.0L) return 0.0;
  const long double q = -half * half;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + n));
    sum += term;
    if (std::fabs(term) <= std::fabs(sum) * 1e-21L) break;
  }
  return static_cast<double>(sum);
}

// Miller's algorithm: J_{k-1} = (2k/x) J_k - J_{k+1} from a start index well
// above max(n_max, x), normalized by J_0 + 2 sum J_{2k} = 1.
std::vector<double> miller_sequence(double x, int n_max) {
  const int top = static_cast<int>(std::max<double>(n_max, x)) + 40 +
                  static_cast<int>(std::sqrt(40.0 * std::max<double>(n_max, x)));
  const int start = top + (top % 2);
  std::vector<long double> j(static_cast<std::size_t>(start) + 2, 0.0L);
  j[static_cast<std::size_t>(start) + 1] = 0.0L;
  j[static_cast<std::size_t>(start)] = 1e-300L;
  long double norm = 0.0L;
  for (int k = start; k >= 1; --k) {
    const auto ku = static_cast<std::size_t>(k);
    j[ku - 1] = (2.0L * k / static_cast<long double>(x)) * j[ku] - j[ku + 1];
    if (std::fabs(j[ku - 1]) > 1e300L) {
      for (auto& v : j) v *= 1e-300L;
    }
  }
  norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0L * j[static_cast<std::size_t>(k)];
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] =
        static_cast<double>(j[static_cast<std::size_t>(n)] / norm);
  }
  return out;
}

}  // namespace

std::vector<double> bessel_j_sequence(double x, int n_max) {
  if (n_max < 0) throw std::invalid_argument("bessel: n_max must be >= 0");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("bessel: argument must be finite and >= 0");
  }
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x < kSeriesLimit) {
    for (int n = 0; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = series_j(n, x);
    return out;
  }
  return miller_sequence(x, n_max);
}

std::vector<SidebandAmplitude> sideband_amplitudes(double beta, int n_max) {
  const auto j = bessel_j_sequence(beta, n_max);
  std::vector<SidebandAmplitude> out;
  out.reserve(j.size());
  for (std::size_t n = 0; n < j.size(); ++n) {
    out.push_back({static_cast<int>(n), j[n]});
  }
  return out;
}

}  // namespace axsim
