#ifndef UNCLAB_STUDENT_T_HPP
#define UNCLAB_STUDENT_T_HPP

namespace unclab {

/// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
/// continued fraction. a, b > 0; x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// CDF of Student's t with df degrees of freedom.
double t_cdf(double t, int df);

/// Quantile of Student's t: the q with t_cdf(q, df) = prob to within 1e-10,
/// found by bracketed bisection plus Newton polish. prob in (0, 1), df >= 1.
/// t_quantile(df, 0.5) is exactly 0.
double t_quantile(int df, double prob);

}  // namespace unclab

#endif  // UNCLAB_STUDENT_T_HPP
