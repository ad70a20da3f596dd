// oracle.cpp
#include "dissop/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace dissop {

namespace {

const cxd kI(0.0, 1.0);

void require_atomic(const OperatorSpec& spec, const char* who) {
    if (!spec.measure().is_atomic())
        throw InputError(std::string(who) + " requires a purely atomic measure");
}

// Stacked c: E -> node-sampled space, row block p is c(x_p).
Mat stacked_c(const OperatorSpec& spec) {
    const int n = spec.dim_h();
    Mat c(spec.node_count() * n, spec.rank());
    for (int p = 0; p < spec.node_count(); ++p)
        c.block(p * n, 0, n, spec.rank()) = spec.c_factor(spec.node(p));
    return c;
}

}  // namespace

Mat direct_char_fn(const OperatorSpec& spec, cxd z) {
    require_atomic(spec, "direct_char_fn");
    const DiscreteOperator astar = adjoint(spec);
    Mat m = astar.matrix;
    m.diagonal().array() -= z;
    Eigen::PartialPivLU<Mat> lu(m);
    const Mat c = stacked_c(spec);
    const Mat f = lu.solve(c);
    const double rnorm = (m * f - c).norm();
    if (!(rnorm <= 1e-8 * std::max(1.0, c.norm())))
        throw SingularityError("direct_char_fn: dense solve is singular", 0.0, z);
    // c^* with the mu-weighted pairing: sum_p mu_p c(x_p)^* f(x_p)
    const int n = spec.dim_h();
    Mat s = Mat::Identity(spec.rank(), spec.rank());
    for (int p = 0; p < spec.node_count(); ++p) {
        const NodeRef ref = spec.node(p);
        s += kI * spec.node_weight(ref) *
             (spec.c_factor(ref).adjoint() * f.block(p * n, 0, n, spec.rank()));
    }
    return s;
}

std::vector<Vec> direct_resolvent(const OperatorSpec& spec, cxd z, const std::vector<Vec>& h) {
    require_atomic(spec, "direct_resolvent");
    if (static_cast<int>(h.size()) != spec.node_count())
        throw InputError("direct_resolvent: h must be sampled at every node");
    const int n = spec.dim_h();
    Vec rhs(spec.node_count() * n);
    for (int p = 0; p < spec.node_count(); ++p) rhs.segment(p * n, n) = h[static_cast<std::size_t>(p)];
    Mat m = adjoint(spec).matrix;
    m.diagonal().array() -= z;
    const Vec f = m.partialPivLu().solve(rhs);
    if (!((m * f - rhs).norm() <= 1e-8 * std::max(1.0, rhs.norm())))
        throw SingularityError("direct_resolvent: dense solve is singular", 0.0, z);
    std::vector<Vec> out(static_cast<std::size_t>(spec.node_count()));
    for (int p = 0; p < spec.node_count(); ++p) out[static_cast<std::size_t>(p)] = f.segment(p * n, n);
    return out;
}

OracleResult normal_similarity_check(const OperatorSpec& spec) {
    require_atomic(spec, "normal_similarity_check");
    const Mat a = assemble(spec).symmetrized();
    const int dim = static_cast<int>(a.rows());
    OracleResult res;

    const Mat comm = a * a.adjoint() - a.adjoint() * a;
    const double anorm = operator_norm(a);
    res.commutation_defect = operator_norm(comm);
    res.normal = res.commutation_defect <= 1e-10 * std::max(anorm * anorm, 1e-300);

    Eigen::ComplexEigenSolver<Mat> es(a, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw ModelError("dense eigensolver failed");
    std::vector<cxd> evs(es.eigenvalues().data(), es.eigenvalues().data() + dim);

    // Cluster eigenvalues, then take geometric multiplicity from the rank
    // deficiency of A - lambda I.
    std::vector<bool> used(evs.size(), false);
    for (std::size_t i = 0; i < evs.size(); ++i) {
        if (used[i]) continue;
        EigenvalueInfo info;
        info.value = evs[i];
        info.algebraic = 0;
        cxd sum = 0.0;
        for (std::size_t j = i; j < evs.size(); ++j) {
            if (!used[j] && std::abs(evs[j] - evs[i]) <= kEigenClusterTol * std::max(1.0, std::abs(evs[i]))) {
                used[j] = true;
                ++info.algebraic;
                sum += evs[j];
            }
        }
        info.value = sum / static_cast<double>(info.algebraic);
        Mat shifted = a;
        shifted.diagonal().array() -= info.value;
        const auto sv = shifted.jacobiSvd().singularValues();
        const double smax = std::max(sv(0), 1e-300);
        int rank = 0;
        for (int k = 0; k < sv.size(); ++k)
            if (sv(k) > 1e-10 * smax) ++rank;
        info.geometric = dim - rank;
        res.eigenvalues.push_back(info);
    }
    res.diagonalizable = true;
    for (const auto& e : res.eigenvalues)
        if (e.geometric < e.algebraic) res.diagonalizable = false;

    Mat v = es.eigenvectors();
    for (int j = 0; j < v.cols(); ++j) v.col(j).normalize();
    const auto sv = v.jacobiSvd().singularValues();
    res.eigenbasis_condition =
        sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    return res;
}

OperatorSpec example_3_11(int n_points, const std::vector<double>& masses,
                          const std::vector<double>& weights, const std::vector<double>& alphas) {
    if (n_points < 1) throw InputError("example_3_11: need at least one point");
    const std::size_t n = static_cast<std::size_t>(n_points);
    if (masses.size() != n || weights.size() != n || alphas.size() != n)
        throw InputError("example_3_11: masses/weights/alphas must have n_points entries");
    for (std::size_t i = 0; i < n; ++i)
        if (!(masses[i] > 0.0) || !(weights[i] >= 0.0))
            throw InputError("example_3_11: masses must be positive and weights nonnegative");

    std::vector<Atom> atoms;
    std::vector<Mat> alpha_m, c_m;
    for (std::size_t i = 0; i < n; ++i) {
        atoms.push_back({static_cast<double>(i + 1) / (n_points + 1), masses[i]});
        alpha_m.push_back(Mat::Constant(1, 1, cxd(alphas[i], 0.0)));
        Mat c = Mat::Zero(1, n_points);
        c(0, static_cast<int>(i)) = std::sqrt(weights[i]);
        c_m.push_back(std::move(c));
    }
    return OperatorSpec(Measure::from_atoms(std::move(atoms)), 1, n_points, std::move(alpha_m),
                        std::move(c_m), {}, {}, /*commutativity=*/true);
}

}  // namespace dissop
