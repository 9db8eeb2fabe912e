#ifndef EXRENEW_SPECIAL_HPP
#define EXRENEW_SPECIAL_HPP

namespace exrenew {

// Regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x).
// Series expansion for x < a+1, continued fraction otherwise; all scaling
// done through log-gamma so large shapes (a ~ 1e4) stay finite.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation with
// the usual symmetry switch at x = (a+1)/(a+b+2).
double regularized_beta(double a, double b, double x);

// log of the rising factorial (alpha)_n = alpha (alpha+1) ... (alpha+n-1).
double log_pochhammer(double alpha, long n);

// log( Gamma(a)/Gamma(b) ) for positive a, b.
double log_gamma_ratio(double a, double b);

} // namespace exrenew

#endif
