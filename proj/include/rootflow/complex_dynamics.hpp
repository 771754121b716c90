#pragma once
// Generic complex-root differentiation and the degree-preserving circular
// derivative z d/dz - N/2, driven by Aberth-Ehrlich sweeps on root sums; no
// coefficient expansion ever happens.

#include <complex>
#include <cstdint>
#include <vector>

namespace rootflow {

class ComplexRootSet {
public:
    explicit ComplexRootSet(std::vector<std::complex<double>> roots);

    const std::vector<std::complex<double>>& roots() const { return roots_; }
    int degree() const { return static_cast<int>(roots_.size()); }

private:
    std::vector<std::complex<double>> roots_;
};

/// Roots of P' for P = prod (z - z_j), via Aberth-Ehrlich with the implicit
/// Newton ratio P'/P'' = S1/(S1^2 - S2), S1 = sum 1/(z - z_j),
/// S2 = sum 1/(z - z_j)^2. Repeated input roots of multiplicity k contribute
/// k-1 exact output copies before iteration. Sum of the output roots is
/// checked against ((n-1)/n) * sum of inputs on every call.
ComplexRootSet derivative_roots_complex(const ComplexRootSet& s);

/// Roots of H = z P' - (N/2) P, same degree N. Newton ratio
/// (z S1 - N/2) / (z S1^2 - (N/2) S1 + S1 - z S2). |prod roots| is conserved
/// when no root sits at the origin; the conservation is checked per call in
/// log-modulus space.
ComplexRootSet circular_derivative(const ComplexRootSet& s, int n_operator = -1);

/// Multiplies each root by e^{i theta}, theta uniform in [-scale, scale].
ComplexRootSet perturb_arguments(const ComplexRootSet& s, double scale, std::uint64_t seed);

/// For each radius, m points r e^{i theta_k} with theta_k i.i.d. uniform on
/// [0, 2 pi).
ComplexRootSet sample_iid_arguments(const std::vector<double>& radii, int m,
                                    std::uint64_t seed);

/// Pairs closer than rel_threshold times the set diameter. Reported, never
/// merged.
int near_collision_count(const ComplexRootSet& s, double rel_threshold = 1e-8);

} // namespace rootflow
