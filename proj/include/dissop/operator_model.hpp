// operator_model.hpp - problem data (alpha, c, k) and the exact finite matrix
// realization of A, A*, Im A on atomic measures plus their quadrature
// discretizations.
#pragma once

#include <optional>
#include <vector>

#include "dissop/measure.hpp"
#include "dissop/types.hpp"

namespace dissop {

// One support point of the discretized operator: an atom (weight = atom mass)
// or a quadrature cell node (weight = cell weight).
struct NodeRef {
    bool is_atom;
    int index;  // into measure atoms()/cells()
};

// Problem instance: measure, dim H = n, rank E = r, per-node Hermitian alpha(x)
// (n x n) and kernel factor c(x) (n x r); k(x,s) = c(x) c(s)^*.
class OperatorSpec {
public:
    OperatorSpec(Measure measure, int dim_h, int rank, std::vector<Mat> alpha_atoms,
                 std::vector<Mat> c_atoms, std::vector<Mat> alpha_cells, std::vector<Mat> c_cells,
                 bool commutativity_declared);

    // Scalar (n = r = 1) atomic helper used throughout the tests and tools.
    static OperatorSpec scalar_atomic(std::vector<Atom> atoms, std::vector<cxd> alpha,
                                      std::vector<cxd> c, bool commutativity = true);
    // Sample alpha(x), c(x) on every node of the measure.
    static OperatorSpec from_functions(Measure measure, int dim_h, int rank,
                                       const std::function<Mat(double)>& alpha,
                                       const std::function<Mat(double)>& c,
                                       bool commutativity = true);

    const Measure& measure() const { return measure_; }
    const StarGrid& star_grid() const { return grid_; }
    int dim_h() const { return dim_h_; }
    int rank() const { return rank_; }
    bool commutativity_declared() const { return commutativity_declared_; }

    int node_count() const;
    NodeRef node(int i) const;          // nodes in increasing x order
    double node_x(NodeRef ref) const;
    double node_weight(NodeRef ref) const;  // atom mass or cell weight
    const Mat& alpha(NodeRef ref) const;
    const Mat& c_factor(NodeRef ref) const;
    Mat kernel_diag(NodeRef ref) const { return c_factor(ref) * c_factor(ref).adjoint(); }

    // int tr k(x,x) dmu(x) = tr(2 Im A)
    double trace_kernel_integral() const;
    // int ||k(x,x)|| dmu(x); the exponent of the Gronwall envelopes.
    double kernel_norm_integral() const;

private:
    Measure measure_;
    StarGrid grid_;
    int dim_h_;
    int rank_;
    std::vector<Mat> alpha_atoms_, c_atoms_;
    std::vector<Mat> alpha_cells_, c_cells_;
    bool commutativity_declared_;
    std::vector<NodeRef> node_order_;
};

// Dense block matrix on the node-sampled weighted space l^2(mu; H^N).
struct DiscreteOperator {
    int dim_h = 0;
    std::vector<double> weights;  // mu-mass per node, increasing x order
    Mat matrix;                   // (N*n) x (N*n)

    // Adjoint with respect to the mu-weighted inner product.
    Mat weighted_adjoint() const;
    // D * matrix * D^{-1} with D = diag(sqrt(mu)) (x) I_n: same spectrum,
    // plain l^2 adjoint equals the weighted one.
    Mat symmetrized() const;
};

struct SpectrumEntry {
    double x;        // atom position
    int branch;      // j
    cxd z;           // alpha_j(x) + i/2 mu_x kappa_j(x)^2
    double weight;   // Im z
    double phase;    // phi_j(x), e^{i phi_j} (i - z_j)/(i - conj z_j) > 0
    double kappa_sq; // kappa_j(x)^2
    double alpha_j;
};

struct SpectrumData {
    std::vector<SpectrumEntry> entries;
    std::vector<cxd> points() const;
    double blaschke_sum() const;  // sum Im z_j(x)
};

struct JointEigenpair {
    double kappa_sq;  // > 0 eigenvalue of k(x,x)
    double alpha_j;   // eigenvalue of alpha(x) on the same vector
    Vec e;            // unit vector in H
};

Mat kernel_eval(const OperatorSpec& spec, int node_i, int node_j);

DiscreteOperator assemble(const OperatorSpec& spec);
DiscreteOperator adjoint(const OperatorSpec& spec);

// (A - A*)/(2i) assembled independently from k; .second = trace of 2 Im A.
std::pair<DiscreteOperator, double> imag_part(const OperatorSpec& spec);

// Orthonormal vectors diagonalizing both k(x,x) (eigenvalues kappa^2 > 0) and
// alpha(x); the remainder of alpha on ker k(x,x) is dropped.  Ordered by
// descending kappa^2, then ascending alpha_j.
std::vector<JointEigenpair> joint_spectrum(const OperatorSpec& spec, NodeRef node);

// max over nodes of ||k(x,x) alpha(x) - alpha(x) k(x,x)|| (operator norm).
double commutativity_defect(const OperatorSpec& spec);

// One entry per (atom, positive branch of k(x,x)); phases normalized.
SpectrumData atom_eigenvalues(const OperatorSpec& spec);

}  // namespace dissop
