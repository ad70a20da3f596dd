// cauchy.hpp - the matrix Cauchy problem for G(t,z): exact affine propagation
// across atom intervals, error-controlled one-step integration on continuous
// stretches, the resolvent route, and the validating Picard iteration.
#pragma once

#include <array>
#include <vector>

#include "dissop/operator_model.hpp"
#include "dissop/types.hpp"

namespace dissop {

// Solution path of
//   G'(t,z) = c_*(t)^* Omega(t,z) c_*(t) G(t,z),   G(M,z) = I
// on the breakpoint grid of [0,M], together with the independently propagated
// inverse path (G^{-1})' = -G^{-1} c_*^* Omega c_*.
struct GPath {
    cxd z;
    std::vector<double> breakpoints;  // ascending; 0, M, every phi(x-0), phi(x), phi(x+0)
    std::vector<Mat> values;
    std::vector<Mat> inverse_values;
    // int_t^M ||k_*(tau,tau)|| dtau and the trace-norm variant, per breakpoint.
    std::vector<double> kernel_norm_tail;
    std::vector<double> kernel_trace_tail;
    // Per atom interval / per quadrature cell: breakpoint indices of
    // {t_lo, t_mid, t_hi} (t_mid is phi(x), where the resolvent formulas read G).
    std::vector<std::array<int, 3>> atom_breaks;
    std::vector<std::array<int, 3>> cell_breaks;

    const Mat& at_zero() const { return values.front(); }
    const Mat& at(int i) const { return values[static_cast<std::size_t>(i)]; }
};

struct SolveOptions {
    double abs_tol = kOdeTol;
    double rel_tol = kOdeTol;
    bool with_inverse = true;
};

// Omega(t,z) = [(t - phi_*(t)) k_*(t,t) + i (alpha_*(t) - z I)]^{-1}, n x n.
// Throws SingularityError when the bracket is numerically singular.
Mat omega(const OperatorSpec& spec, double t, cxd z);

// c_*(t)^* Omega(t,z) c_*(t) evaluated in the r x r space.
Mat generator(const OperatorSpec& spec, double t, cxd z);

GPath solve_g(const OperatorSpec& spec, cxd z, const SolveOptions& opt = {});

// Inverse path on its own (same sweep; returns the full GPath so callers can
// check G * G^{-1} = I at every breakpoint).
GPath inverse_path(const OperatorSpec& spec, cxd z, const SolveOptions& opt = {});

struct PicardResult {
    Mat iterate_at_zero;  // X_k(0)
    double gamma;         // Gamma(0) = int_0^M ||k_*|| dtau
    double tail_bound;    // sum_{j>k} Gamma^j / j!
    int iterations;
};

// k-th Picard iterate of the integral form of the Cauchy problem, evaluated
// at t = 0 with spectral per-segment quadrature, plus the factorial tail bound.
PicardResult solve_g_picard(const OperatorSpec& spec, cxd z, int iterations);

struct ResolventResult {
    std::vector<Vec> f;        // per node (increasing x), dim H each; f = (A*-z)^{-1} h
    std::vector<double> g_ts;  // breakpoints where g was recorded
    std::vector<Vec> g_values; // E-valued path g(t,z,h)
    double g_max_norm;
};

// Applies (A*-z)^{-1} to a node-sampled h via the Cauchy problem for g and
// f(x) = [alpha(x)-z]^{-1} [h(x) - c(x) g(phi(x),z)].
ResolventResult resolvent_apply(const OperatorSpec& spec, cxd z, const std::vector<Vec>& h,
                                const SolveOptions& opt = {});

}  // namespace dissop
