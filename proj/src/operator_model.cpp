// operator_model.cpp
#include "dissop/operator_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace dissop {

namespace {

void check_coefficients(const std::vector<Mat>& alphas, const std::vector<Mat>& cs,
                        std::size_t count, int n, int r, const char* what) {
    if (alphas.size() != count || cs.size() != count)
        throw InputError(std::string("coefficient count does not match measure ") + what);
    for (std::size_t i = 0; i < count; ++i) {
        if (alphas[i].rows() != n || alphas[i].cols() != n)
            throw InputError("alpha matrix has wrong dimensions");
        if (cs[i].rows() != n || cs[i].cols() != r)
            throw InputError("c factor has wrong dimensions");
        if (!is_hermitian(alphas[i]))
            throw ModelError("alpha(x) is not Hermitian within tolerance");
    }
}

}  // namespace

OperatorSpec::OperatorSpec(Measure measure, int dim_h, int rank, std::vector<Mat> alpha_atoms,
                           std::vector<Mat> c_atoms, std::vector<Mat> alpha_cells,
                           std::vector<Mat> c_cells, bool commutativity_declared)
    : measure_(std::move(measure)),
      grid_(measure_),
      dim_h_(dim_h),
      rank_(rank),
      alpha_atoms_(std::move(alpha_atoms)),
      c_atoms_(std::move(c_atoms)),
      alpha_cells_(std::move(alpha_cells)),
      c_cells_(std::move(c_cells)),
      commutativity_declared_(commutativity_declared) {
    if (dim_h_ < 1 || rank_ < 1) throw InputError("dim_h and rank must be positive");
    check_coefficients(alpha_atoms_, c_atoms_, measure_.atoms().size(), dim_h_, rank_, "atoms");
    check_coefficients(alpha_cells_, c_cells_, measure_.cells().size(), dim_h_, rank_, "cells");
    for (const auto& seg : grid_.segments()) {
        if (seg.is_atom) {
            node_order_.push_back({true, grid_.atom_intervals()[seg.index].atom_index});
        } else {
            for (const auto& cell : grid_.stretches()[seg.index].cells)
                node_order_.push_back({false, cell.cell_index});
        }
    }
    if (commutativity_declared_) {
        const double defect = commutativity_defect(*this);
        double scale = 0.0;
        for (int i = 0; i < node_count(); ++i) {
            const NodeRef ref = node(i);
            scale = std::max(scale, operator_norm(kernel_diag(ref)) * operator_norm(alpha(ref)));
        }
        if (defect > kCommutatorRelTol * std::max(scale, 1e-300) && defect > 0.0)
            throw ModelError("commutativity declared but (2.2) defect above tolerance");
    }
}

OperatorSpec OperatorSpec::scalar_atomic(std::vector<Atom> atoms, std::vector<cxd> alpha,
                                         std::vector<cxd> c, bool commutativity) {
    std::vector<Mat> am, cm;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        am.push_back(Mat::Constant(1, 1, alpha.at(i)));
        cm.push_back(Mat::Constant(1, 1, c.at(i)));
    }
    return OperatorSpec(Measure::from_atoms(std::move(atoms)), 1, 1, std::move(am), std::move(cm),
                        {}, {}, commutativity);
}

OperatorSpec OperatorSpec::from_functions(Measure measure, int dim_h, int rank,
                                          const std::function<Mat(double)>& alpha,
                                          const std::function<Mat(double)>& c,
                                          bool commutativity) {
    std::vector<Mat> aa, ca, ac, cc;
    for (const auto& a : measure.atoms()) {
        aa.push_back(alpha(a.x));
        ca.push_back(c(a.x));
    }
    for (const auto& q : measure.cells()) {
        ac.push_back(alpha(q.x));
        cc.push_back(c(q.x));
    }
    return OperatorSpec(std::move(measure), dim_h, rank, std::move(aa), std::move(ca),
                        std::move(ac), std::move(cc), commutativity);
}

int OperatorSpec::node_count() const { return static_cast<int>(node_order_.size()); }

NodeRef OperatorSpec::node(int i) const {
    if (i < 0 || i >= node_count()) throw InputError("node index out of range");
    return node_order_[static_cast<std::size_t>(i)];
}

double OperatorSpec::node_x(NodeRef ref) const {
    return ref.is_atom ? measure_.atoms()[ref.index].x : measure_.cells()[ref.index].x;
}

double OperatorSpec::node_weight(NodeRef ref) const {
    return ref.is_atom ? measure_.atoms()[ref.index].mass : measure_.cells()[ref.index].weight;
}

const Mat& OperatorSpec::alpha(NodeRef ref) const {
    return ref.is_atom ? alpha_atoms_[ref.index] : alpha_cells_[ref.index];
}

const Mat& OperatorSpec::c_factor(NodeRef ref) const {
    return ref.is_atom ? c_atoms_[ref.index] : c_cells_[ref.index];
}

double OperatorSpec::trace_kernel_integral() const {
    double s = 0.0;
    for (int i = 0; i < node_count(); ++i) {
        const NodeRef ref = node(i);
        s += node_weight(ref) * c_factor(ref).squaredNorm();  // tr k = ||c||_HS^2
    }
    return s;
}

double OperatorSpec::kernel_norm_integral() const {
    double s = 0.0;
    for (int i = 0; i < node_count(); ++i) {
        const NodeRef ref = node(i);
        s += node_weight(ref) * operator_norm(kernel_diag(ref));
    }
    return s;
}

Mat kernel_eval(const OperatorSpec& spec, int node_i, int node_j) {
    if (node_i < 0 || node_i >= spec.node_count() || node_j < 0 || node_j >= spec.node_count())
        throw InputError("kernel_eval: unknown node");
    return spec.c_factor(spec.node(node_i)) * spec.c_factor(spec.node(node_j)).adjoint();
}

Mat DiscreteOperator::weighted_adjoint() const {
    const int nnodes = static_cast<int>(weights.size());
    Mat out(matrix.rows(), matrix.cols());
    for (int p = 0; p < nnodes; ++p)
        for (int q = 0; q < nnodes; ++q)
            out.block(p * dim_h, q * dim_h, dim_h, dim_h) =
                (weights[q] / weights[p]) *
                matrix.block(q * dim_h, p * dim_h, dim_h, dim_h).adjoint();
    return out;
}

Mat DiscreteOperator::symmetrized() const {
    const int nnodes = static_cast<int>(weights.size());
    Eigen::VectorXd d(matrix.rows());
    for (int p = 0; p < nnodes; ++p)
        for (int i = 0; i < dim_h; ++i) d(p * dim_h + i) = std::sqrt(weights[p]);
    return d.asDiagonal() * matrix * d.cwiseInverse().asDiagonal();
}

namespace {

DiscreteOperator assemble_impl(const OperatorSpec& spec, bool adjoint_form) {
    const int nnodes = spec.node_count();
    const int n = spec.dim_h();
    DiscreteOperator op;
    op.dim_h = n;
    op.weights.resize(nnodes);
    op.matrix = Mat::Zero(nnodes * n, nnodes * n);
    std::vector<NodeRef> refs(nnodes);
    for (int i = 0; i < nnodes; ++i) {
        refs[i] = spec.node(i);
        op.weights[i] = spec.node_weight(refs[i]);
    }
    const cxd iunit(0.0, 1.0);
    for (int p = 0; p < nnodes; ++p) {
        const Mat& cp = spec.c_factor(refs[p]);
        for (int q = 0; q < nnodes; ++q) {
            Mat block = Mat::Zero(n, n);
            if (p == q) {
                // alpha(x) + (or -) i/2 mu_x k(x,x): the int_0^{x+} half-mass term
                block = spec.alpha(refs[p]);
                const Mat kxx = cp * cp.adjoint();
                block += (adjoint_form ? -iunit : iunit) * 0.5 * op.weights[p] * kxx;
            } else if (!adjoint_form && q < p) {
                block = iunit * op.weights[q] * (cp * spec.c_factor(refs[q]).adjoint());
            } else if (adjoint_form && q > p) {
                block = -iunit * op.weights[q] * (cp * spec.c_factor(refs[q]).adjoint());
            }
            op.matrix.block(p * n, q * n, n, n) = block;
        }
    }
    return op;
}

}  // namespace

DiscreteOperator assemble(const OperatorSpec& spec) { return assemble_impl(spec, false); }
DiscreteOperator adjoint(const OperatorSpec& spec) { return assemble_impl(spec, true); }

std::pair<DiscreteOperator, double> imag_part(const OperatorSpec& spec) {
    const int nnodes = spec.node_count();
    const int n = spec.dim_h();
    DiscreteOperator op;
    op.dim_h = n;
    op.weights.resize(nnodes);
    op.matrix = Mat::Zero(nnodes * n, nnodes * n);
    std::vector<NodeRef> refs(nnodes);
    for (int i = 0; i < nnodes; ++i) {
        refs[i] = spec.node(i);
        op.weights[i] = spec.node_weight(refs[i]);
    }
    double trace2im = 0.0;
    for (int p = 0; p < nnodes; ++p)
        for (int q = 0; q < nnodes; ++q) {
            // (2 Im A f)(x) = int k(x,s) f(s) dmu(s), all of [0,1]
            const Mat kpq = spec.c_factor(refs[p]) * spec.c_factor(refs[q]).adjoint();
            op.matrix.block(p * n, q * n, n, n) = 0.5 * op.weights[q] * kpq;
            if (p == q) trace2im += op.weights[p] * kpq.trace().real();
        }
    return {op, trace2im};
}

std::vector<JointEigenpair> joint_spectrum(const OperatorSpec& spec, NodeRef node) {
    const Mat kxx = spec.kernel_diag(node);
    const Mat& a = spec.alpha(node);
    Eigen::SelfAdjointEigenSolver<Mat> ek(kxx);
    if (ek.info() != Eigen::Success) throw ModelError("eigensolver failed on k(x,x)");
    const Eigen::VectorXd kev = ek.eigenvalues();
    const double kscale = std::max(kev.cwiseAbs().maxCoeff(), 1e-300);

    std::vector<JointEigenpair> out;
    // Walk eigenvalue clusters of k(x,x); diagonalize alpha inside each.
    int i = 0;
    const int n = spec.dim_h();
    while (i < n) {
        int j = i + 1;
        while (j < n && std::abs(kev(j) - kev(i)) <= 1e-12 * kscale) ++j;
        const double ksq = kev.segment(i, j - i).mean();
        if (ksq > 1e-12 * kscale) {
            const Mat v = ek.eigenvectors().middleCols(i, j - i);
            Eigen::SelfAdjointEigenSolver<Mat> ea(v.adjoint() * a * v);
            if (ea.info() != Eigen::Success) throw ModelError("eigensolver failed on alpha block");
            for (int l = 0; l < j - i; ++l) {
                JointEigenpair p;
                p.kappa_sq = ksq;
                p.alpha_j = ea.eigenvalues()(l);
                p.e = v * ea.eigenvectors().col(l);
                out.push_back(std::move(p));
            }
        }
        i = j;
    }
    std::sort(out.begin(), out.end(), [](const JointEigenpair& a_, const JointEigenpair& b_) {
        if (a_.kappa_sq != b_.kappa_sq) return a_.kappa_sq > b_.kappa_sq;
        return a_.alpha_j < b_.alpha_j;
    });
    return out;
}

double commutativity_defect(const OperatorSpec& spec) {
    double defect = 0.0;
    for (int i = 0; i < spec.node_count(); ++i) {
        const NodeRef ref = spec.node(i);
        const Mat kxx = spec.kernel_diag(ref);
        const Mat& a = spec.alpha(ref);
        defect = std::max(defect, operator_norm(kxx * a - a * kxx));
    }
    return defect;
}

// Phase making e^{i phi} (i - z)/(i - conj z) real positive; 0 when z = i.
static double blaschke_phase(cxd z) {
    const cxd w = (cxd(0.0, 1.0) - z) / (cxd(0.0, 1.0) - std::conj(z));
    if (std::abs(w) < 1e-300) return 0.0;
    return -std::arg(w);
}

SpectrumData atom_eigenvalues(const OperatorSpec& spec) {
    if (!spec.commutativity_declared())
        throw ModelError("atom_eigenvalues requires the commutativity assumption");
    SpectrumData data;
    const auto& atoms = spec.measure().atoms();
    for (std::size_t ia = 0; ia < atoms.size(); ++ia) {
        const NodeRef ref{true, static_cast<int>(ia)};
        const auto pairs = joint_spectrum(spec, ref);
        int branch = 0;
        for (const auto& p : pairs) {
            SpectrumEntry e;
            e.x = atoms[ia].x;
            e.branch = branch++;
            e.kappa_sq = p.kappa_sq;
            e.alpha_j = p.alpha_j;
            e.z = cxd(p.alpha_j, 0.5 * atoms[ia].mass * p.kappa_sq);
            e.weight = e.z.imag();
            e.phase = blaschke_phase(e.z);
            data.entries.push_back(e);
        }
    }
    return data;
}

std::vector<cxd> SpectrumData::points() const {
    std::vector<cxd> p;
    p.reserve(entries.size());
    for (const auto& e : entries) p.push_back(e.z);
    return p;
}

double SpectrumData::blaschke_sum() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.weight;
    return s;
}

}  // namespace dissop
