#pragma once

#include <vector>

#include "jetphase/distribution.hpp"
#include "jetphase/jet.hpp"
#include "jetphase/matrix.hpp"
#include "jetphase/operator.hpp"

namespace jetphase {

/// Phase phi = nu^{-1} phi_{-1} + phi_0 + nu phi_1 + ... and density rho = e^u dx.
struct PhaseDensityPair {
    Jet phase;
    Jet u;

    int num_vars() const { return phase.num_vars(); }
};

struct HessianData {
    ScalarMatrix h_lower;
    ScalarMatrix h_upper;
    /// psi = 1/2 h_ij x^i x^j
    Jet psi;
    /// Delta = -1/2 h^ij d_i d_j
    FormalOperator delta_op;
};

using VectorField = std::vector<Jet>;

/// Shape checks on a pair: matching charts, no aux parameters, phase nu >= -1, u nu >= 0.
void validate_pair(const PhaseDensityPair& pair);

HessianData hessian_data(const PhaseDensityPair& pair);

/// chi = phi - nu^{-1} psi - phi_0(0) + u - u_0(0); every term has standard degree >= 1.
Jet phase_remainder(const PhaseDensityPair& pair);

/// The normalized formal oscillatory integral of the pair, modulo nu^{N+1}.
PointDistribution foi_distribution(const PhaseDensityPair& pair, int n_max);

/// L(f) modulo nu^{N+1} for the pair's oscillatory integral.
Jet foi_eval(const PhaseDensityPair& pair, const Jet& f, int n_max);

/// div_rho v = sum_i d_i v^i + v(u).
Jet divergence(const VectorField& v, const PhaseDensityPair& pair);

/// A defect series and the highest nu-order through which it is exact.
struct Defect {
    Jet value;
    int exact_through = 0;

    bool vanishes() const { return value.is_zero(); }
};

/// L(vf + (v phi + div v) f), exact through N minus the nu-depth of the argument.
Defect check_foi_axiom(const PointDistribution& l, const PhaseDensityPair& pair, const VectorField& v, const Jet& f,
                       int n_max);

/// d/dnu L(f) - L(df/dnu + (dphi/dnu + du/dnu - n/(2 nu)) f).
Defect check_strong(const PointDistribution& l, const PhaseDensityPair& pair, const Jet& f, int n_max);

/// A pair (nu^{-1} psi + chi, u = 0) whose oscillatory integral agrees with L modulo nu^{N+1}.
PhaseDensityPair recover_phase(const PointDistribution& l, int n_max);

} // namespace jetphase
