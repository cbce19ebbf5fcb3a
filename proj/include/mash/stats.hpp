#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mash {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
// uses the asymptotic Kolmogorov distribution with the Stephens small-sample
// correction; adequate for n >= ~50, and all callers here use n >= 100.
KsResult ks_test(std::vector<double> samples,
                 const std::function<double(double)>& cdf);

// Two-sample KS test (same D statistic over the pooled order, effective
// sample size n1*n2/(n1+n2)).
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

// Survival function of the Kolmogorov distribution, Q(lambda).
double kolmogorov_survival(double lambda);

// CDF of Beta(1, b): F(x) = 1 - (1-x)^b on [0, 1]. The distribution of
// |<u, v>|^2 for a fixed unit u and v uniform on the complex unit sphere in
// dimension b+1.
double beta1_cdf(double x, double b);

struct BinomialCi {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval; z defaults to the 99% two-sided normal quantile.
BinomialCi wilson_ci(std::int64_t successes, std::int64_t trials,
                     double z = 2.5758293035489004);

}  // namespace mash
