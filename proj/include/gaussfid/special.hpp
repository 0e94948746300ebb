#pragma once

#include <vector>

namespace gaussfid::special {

/// ln(k!) for k = 0..n.
std::vector<double> log_factorials(int n);

/// Generalized Laguerre polynomial L_n^{(k)}(x) by upward recurrence in n.
double laguerre(int n, int k, double x);

/// L_0^{(k)}(x) .. L_{count-1}^{(k)}(x), same recurrence, long double accumulation.
std::vector<long double> laguerre_sequence(int count, int k, long double x);

/// Legendre polynomial P_n(x) by the Bonnet recurrence.
double legendre(int n, double x);

}  // namespace gaussfid::special
