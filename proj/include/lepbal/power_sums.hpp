#pragma once

// Partial and tail sums of integer powers, the only series arithmetic the
// closed-form expectations need.

namespace lepbal {

// sum_{a <= k < b} k^q, zero when b <= a.
double power_sum_range(double q, long a, long b);

// sum_{k >= start} k^-p for p > 1.  Terms are summed directly and the tail is
// closed with the midpoint integral remainder (start+...+M) +
// (M+1/2)^(1-p)/(p-1); summation stops once the Euler-Maclaurin bound
// (p/24)*(M+1/2)^(-p-1) on the closure error drops below 1e-12 of the total.
double inverse_power_tail(double p, long start);

}  // namespace lepbal
