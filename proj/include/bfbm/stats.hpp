#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bfbm {

struct MomentSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double var = 0.0;  // unbiased
    double sd = 0.0;
    double se_mean = 0.0;
};

MomentSummary summarize(const std::vector<double>& x);

// Unbiased sample covariance of paired observations.
double sample_covariance(const std::vector<double>& x, const std::vector<double>& y);

double quantile(std::vector<double> x, double q);

// Kolmogorov asymptotic tail P(D_n > d), adequate for n >= 50.
double ks_pvalue(double d, double n_eff);

// One-sample KS against a cdf given as callable on the sample values.
struct KsResult {
    double statistic = 0.0;
    double pvalue = 0.0;
};
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Regularized lower incomplete gamma P(a, x) and the chi-square upper tail.
double gamma_p(double a, double x);
double chi2_pvalue(double stat, double dof);

double normal_cdf(double x);

}  // namespace bfbm
