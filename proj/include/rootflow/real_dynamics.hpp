#pragma once
// Root-level weighted differentiation for polynomials with all-real roots:
// the image of (z_1..z_n, w_1..w_n) is the sorted root multiset of
// sum_j w_j prod_{l != j} (z - z_l).

#include <vector>

namespace rootflow {

struct RealRootMultiset {
    std::vector<double> roots;    // nondecreasing
    std::vector<double> weights;  // positive, one per root slot
};

/// Returns the n-1 roots, counted with multiplicity, of
/// sum_j w_j prod_{l != j} (z - z_l). A group of k coincident input roots
/// contributes that value k-1 times; the remaining simple roots are located,
/// one per open interval between consecutive distinct inputs, by bisection on
/// z -> sum w_j / (z - z_j) to relative tolerance 2^-46. Output weights are
/// all 1. Throws domain_error for n < 2.
RealRootMultiset weighted_derivative_roots(const RealRootMultiset& s);

/// k-fold composition of weighted_derivative_roots with unit weights
/// (requires equal input weights); degree drops from n to n-k.
RealRootMultiset repeated_derivative(const RealRootMultiset& s, int k);

} // namespace rootflow
