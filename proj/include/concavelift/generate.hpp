#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "concavelift/classify.hpp"

namespace clift::generate {

using Rational = boost::multiprecision::cpp_rational;

// Concave operator with scalar Delta on its range: T = [[V, Z_hat], [0, T_hat]]
// on tower(dim t_hat, shift_depth) (+) H, Z_hat = embed((gamma^2 I - T_hat* T_hat)^{1/2}).
// Delta_T restricted to its range is (gamma^2 - 1) I, so the result is
// Delta_T-regular for every contraction t_hat.
Operator gen_regular_concave_scalar(const Operator& t_hat, double gamma, int shift_depth);

// [[S_+, sigma e_0], [0, 1]] on tower(1, depth) (+) C; a 2-isometry with
// rank-one Delta of norm sigma^2.
Operator gen_brownian_shift(double sigma, int depth);

// Truncated unilateral weighted shift e_l -> weights[l] e_{l+1} on tower(1, depth).
Operator gen_weighted_shift(const std::vector<double>& weights, int depth);

// Scalar recurrences for weighted shifts over exact squared weights.
// Predicates: expansive, isometry, concave, two_isometry, delta_regular.
bool exact_oracle(const std::vector<Rational>& weight_squares, const std::string& predicate);

// Floating-point evaluation of the same recurrences with a guard band;
// near-threshold inputs (within the guard) are resolved as satisfying.
bool oracle(const std::vector<double>& weights, const std::string& predicate,
            double guard = 1e-10);

// Squared Dirichlet weights (n+2)/(n+1), exact.
std::vector<Rational> dirichlet_weight_squares(int count);
std::vector<double> dirichlet_weights(int count);

// Left-invertible 2-hypercontraction with simultaneously scalar block data,
// valid for the inverse Cauchy-dual map by construction; self-validated.
Operator gen_two_hypercontraction(unsigned seed);

}  // namespace clift::generate
