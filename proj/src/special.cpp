#include "gaussfid/special.hpp"

#include <cmath>

#include "gaussfid/errors.hpp"

namespace gaussfid::special {

std::vector<double> log_factorials(int n) {
  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  }
  return lf;
}

std::vector<long double> laguerre_sequence(int count, int k, long double x) {
  std::vector<long double> out(static_cast<std::size_t>(count > 0 ? count : 0));
  if (count <= 0) {
    return out;
  }
  out[0] = 1.0L;
  if (count == 1) {
    return out;
  }
  out[1] = 1.0L + k - x;
  // (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}
  for (int j = 1; j + 1 < count; ++j) {
    out[j + 1] = ((2.0L * j + 1.0L + k - x) * out[j] - (j + k) * out[j - 1]) / (j + 1.0L);
  }
  return out;
}

double laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) {
    throw DomainError("laguerre: order and parameter must be nonnegative");
  }
  return static_cast<double>(laguerre_sequence(n + 1, k, x)[n]);
}

double legendre(int n, double x) {
  if (n < 0) {
    throw DomainError("legendre: order must be nonnegative");
  }
  if (n == 0) {
    return 1.0;
  }
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0) * x * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace gaussfid::special
