// oracle.hpp - exact dense ground truth on purely atomic specs: direct
// characteristic function, resolvent, eigen/Jordan analysis, and the diagonal
// counterexample generator.
#pragma once

#include <vector>

#include "dissop/operator_model.hpp"
#include "dissop/types.hpp"

namespace dissop {

struct EigenvalueInfo {
    cxd value;
    int algebraic;
    int geometric;
};

struct OracleResult {
    std::vector<EigenvalueInfo> eigenvalues;
    bool diagonalizable;
    double eigenbasis_condition;  // condition number of the normalized eigenvector matrix
    bool normal;                  // ||AA* - A*A|| <= 1e-10 ||A||^2
    double commutation_defect;
};

// S_A(z) = I + i c^* (A^* - z)^{-1} c with mu-weighted adjoints, via a dense
// solve on the node-sampled space.  Atomic specs only.
Mat direct_char_fn(const OperatorSpec& spec, cxd z);

// f = (A^* - z)^{-1} h by dense linear solve; reference for resolvent_apply.
std::vector<Vec> direct_resolvent(const OperatorSpec& spec, cxd z, const std::vector<Vec>& h);

OracleResult normal_similarity_check(const OperatorSpec& spec);

// The diagonal-kernel construction: atoms x_m equally spaced in (0,1),
// k(x_n,x_m) = w_n delta_{nm} realized with rank = n_points and
// c(x_m) = sqrt(w_m) times the m-th coordinate embedding; eigenvalues
// z_m = alpha_m + i/2 w_m mu_m.
OperatorSpec example_3_11(int n_points, const std::vector<double>& masses,
                          const std::vector<double>& weights, const std::vector<double>& alphas);

}  // namespace dissop
