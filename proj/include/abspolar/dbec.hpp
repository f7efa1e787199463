#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "abspolar/adjacent.hpp"
#include "abspolar/code_spec.hpp"

namespace abspolar {

// Erasure-structured pair channel: the output reveals both input bits (p),
// only the first (q), only their sum (r), only the second (s), or nothing
// (t). Every pair channel derived from a BEC has this form, which makes BEC
// construction exact and quantization-free.
struct Dbec {
    double p = 0, q = 0, r = 0, s = 0, t = 0;
};

Dbec dbec_init(double eps);

// Closed-form one-layer transforms; kinds as in adjacent.hpp.
Dbec dbec_transform(const Dbec& v, PairTransform kind);

// Erasure probabilities of the two split bit-channels: (r+s+t, q+t).
std::array<double, 2> dbec_erasures(const Dbec& v);

// Polarization metric of the split pair, e1(1-e1) + e2(1-e2).
double dbec_g(const Dbec& v);

bool is_valid(const Dbec& v, double tol = 1e-12);

// Table form over the 27-symbol alphabet {0,1,?}^3 (zero-mass outputs
// dropped), and the inverse classification. Used to cross-check the closed
// forms against the generic table transforms.
AdjacentBitsChannel dbec_to_table(const Dbec& v);
Dbec dbec_from_table(const AdjacentBitsChannel& v);

struct BecConstruction {
    PermutationSpec perms;
    std::vector<double> erasure_probs;  // erasure_probs[i-1] = H of bit-channel i
};

// Exact layer evolution over a BEC; for family == standard all swap sets are
// empty, for abs they are chosen by the score dynamic program on exact
// erasure probabilities.
BecConstruction construct_bec(long n, double eps, CodeFamily family);

// Fraction of values inside [lo, hi] (inclusive).
double unpolarized_fraction(std::span<const double> probs, double lo = 0.01, double hi = 0.99);

struct PowerFit {
    double mu = 0;  // scaling exponent, 1/gamma
    double c = 0;   // prefactor of f(n) ~ c * n^(-gamma)
};

// Least-squares fit of log f against log n; needs >= 3 points with f > 0.
PowerFit scaling_exponent(std::span<const std::pair<double, double>> points);

// Mean of h(1-h); smaller means more polarized.
double gamma_metric(std::span<const double> probs);

}  // namespace abspolar
