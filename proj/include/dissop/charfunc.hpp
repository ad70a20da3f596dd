// charfunc.hpp - characteristic function analytics: evaluation via the Cauchy
// problem, the determinant product formula, factorizations across atoms, and
// eigenvalue/root-vector geometry.
#pragma once

#include <vector>

#include "dissop/cauchy.hpp"
#include "dissop/operator_model.hpp"
#include "dissop/types.hpp"

namespace dissop {

struct CharSample {
    cxd z;
    Mat S;               // r x r, contraction on C_+
    cxd det;
    double trace_defect;  // tr(I - S^* S)
};

CharSample char_fn(const OperatorSpec& spec, cxd z, const SolveOptions& opt = {});
CharSample char_sample_from(const Mat& s, cxd z);

// b_z(w) = (w - z)/(w - conj z); |b_z(w)| < 1 on C_+, = 1 on the real line.
cxd blaschke_factor(cxd z, cxd w);

// Finite product over the atom spectrum of phase-normalized Blaschke factors
// (with the compensating unimodular constant), times the exponential of the
// continuous-part integral.  Requires the commutativity assumption for the
// atom part; the path determinant stays available otherwise.
cxd det_char_fn(const OperatorSpec& spec, cxd z);

struct Factorization {
    Mat left;     // S_{x-}(z) = G(0,z) G(phi(x-0),z)^{-1}
    Mat blaschke; // B_x(z) = [I + i/2 mu_x c^*Rc][I - i/2 mu_x c^*Rc]^{-1}
    Mat right;    // S_{x+}(z) = G(phi(x+0),z)
};

Factorization factorize(const OperatorSpec& spec, int atom_index, cxd z,
                        const SolveOptions& opt = {});

// S_{x_1-} B_{x_1} S_{x_1,x_2} B_{x_2} ... B_{x_n} S_{x_n+} for an increasing
// set of atom indices; the ordered product reconstructs S_A(z).
std::vector<Mat> chain_factorize(const OperatorSpec& spec, const std::vector<int>& atom_indices,
                                 cxd z, const SolveOptions& opt = {});

struct KernelInfo {
    int dim_kernel;        // dim ker S_A(lambda) by singular-value thresholding
    int multiplicity;      // kappa(lambda): entries of the spectrum within tolerance
    bool root_vector_free; // dim_kernel == multiplicity
};

KernelInfo kernel_at(const OperatorSpec& spec, cxd lambda, const SolveOptions& opt = {});

// Eigenvalues clustered to within kEigenClusterTol, with total multiplicities.
std::vector<std::pair<cxd, int>> clustered_eigenvalues(const SpectrumData& spectrum);

}  // namespace dissop
