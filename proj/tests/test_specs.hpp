// test_specs.hpp - shared fixtures: reference specs from worked examples and
// a seeded random corpus generator.
#pragma once

#include <random>
#include <vector>

#include "dissop/measure.hpp"
#include "dissop/operator_model.hpp"

namespace dissop::testing {

// One atom of mass 1 at 1/2, alpha = 0, k = 2 (c = sqrt 2):
// A = i and S_A(z) = (z - i)/(z + i).
inline OperatorSpec one_atom_spec() {
    return OperatorSpec::scalar_atomic({{0.5, 1.0}}, {0.0}, {std::sqrt(2.0)});
}

// Two atoms of mass 1, alpha = 0, c = 1: A = [[i/2, 0], [i, i/2]].
inline OperatorSpec two_atom_spec() {
    return OperatorSpec::scalar_atomic({{0.25, 1.0}, {0.75, 1.0}}, {0.0, 0.0}, {1.0, 1.0});
}

// Lebesgue measure, alpha(x) = x, k = 1: |det S_A(i)| = e^{-pi/4}.
inline OperatorSpec lebesgue_identity_spec(int cells = 512) {
    return OperatorSpec::from_functions(
        Measure::lebesgue(cells), 1, 1,
        [](double x) { return Mat::Constant(1, 1, cxd(x, 0.0)); },
        [](double) { return Mat::Constant(1, 1, cxd(1.0, 0.0)); });
}

inline OperatorSpec lebesgue_square_spec(int cells = 512) {
    return OperatorSpec::from_functions(
        Measure::lebesgue(cells), 1, 1,
        [](double x) { return Mat::Constant(1, 1, cxd(x * x, 0.0)); },
        [](double) { return Mat::Constant(1, 1, cxd(1.0, 0.0)); });
}

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    double gauss() { return std::normal_distribution<double>()(gen); }
    cxd cgauss() { return cxd(gauss(), gauss()); }

    Mat random_matrix(int rows, int cols) {
        Mat m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = cgauss();
        return m;
    }
    Mat random_hermitian(int n) {
        const Mat m = random_matrix(n, n);
        return 0.5 * (m + m.adjoint());
    }
    Mat random_unitary(int n) {
        const Mat m = random_matrix(n, n);
        Eigen::HouseholderQR<Mat> qr(m);
        Mat q = qr.householderQ();
        return q;
    }
    std::vector<Atom> random_atoms(int count) {
        std::vector<Atom> atoms;
        double x = 0.0;
        for (int i = 0; i < count; ++i) {
            x += uniform(0.01, 0.9 / count);
            atoms.push_back({x, uniform(0.05, 0.35)});
        }
        return atoms;
    }
};

// Random atomic spec: <= 20 atoms, dim_H <= 4, rank <= 3, generic
// (non-commuting) coefficients.
inline OperatorSpec random_atomic_spec(unsigned seed, int max_atoms = 20) {
    Rng rng(seed);
    const int n_atoms = rng.uniform_int(1, max_atoms);
    const int n = rng.uniform_int(1, 4);
    const int r = rng.uniform_int(1, std::min(3, n));
    std::vector<Mat> alphas, cs;
    for (int i = 0; i < n_atoms; ++i) {
        alphas.push_back(rng.random_hermitian(n));
        cs.push_back(0.7 * rng.random_matrix(n, r));
    }
    return OperatorSpec(Measure::from_atoms(rng.random_atoms(n_atoms)), n, r, std::move(alphas),
                        std::move(cs), {}, {}, /*commutativity=*/false);
}

// Random commuting atomic spec: alpha(x) and k(x,x) share an eigenbasis at
// every atom; c is built from the positive kappa branches.
inline OperatorSpec random_commuting_spec(unsigned seed, int max_atoms = 20) {
    Rng rng(seed);
    const int n_atoms = rng.uniform_int(1, max_atoms);
    const int n = rng.uniform_int(1, 4);
    const int r = rng.uniform_int(1, std::min(3, n));
    std::vector<Mat> alphas, cs;
    for (int i = 0; i < n_atoms; ++i) {
        const Mat v = rng.random_unitary(n);
        Eigen::VectorXd alpha_ev(n), kappa(n);
        for (int j = 0; j < n; ++j) {
            alpha_ev(j) = rng.uniform(-1.5, 1.5);
            kappa(j) = j < r ? rng.uniform(0.2, 1.2) : 0.0;
        }
        const Mat alpha = v * alpha_ev.asDiagonal().toDenseMatrix().cast<cxd>() * v.adjoint();
        // c = V diag(kappa) U^* restricted to the first r columns
        const Mat u = rng.random_unitary(r);
        Mat c = Mat::Zero(n, r);
        for (int j = 0; j < r; ++j) c += kappa(j) * v.col(j) * u.col(j).adjoint();
        alphas.push_back(0.5 * (alpha + alpha.adjoint()));
        cs.push_back(std::move(c));
    }
    return OperatorSpec(Measure::from_atoms(rng.random_atoms(n_atoms)), n, r, std::move(alphas),
                        std::move(cs), {}, {}, /*commutativity=*/true);
}

// z in the solvability region Im z >= 1 + 1/2 sup mu_x ||k(x,x)||.
inline cxd z_in_region(const OperatorSpec& spec, Rng& rng) {
    double sup = 0.0;
    for (int i = 0; i < spec.node_count(); ++i) {
        const NodeRef ref = spec.node(i);
        if (ref.is_atom)
            sup = std::max(sup, spec.node_weight(ref) * operator_norm(spec.kernel_diag(ref)));
    }
    return cxd(rng.uniform(-2.0, 2.0), 1.0 + 0.5 * sup + rng.uniform(0.0, 3.0));
}

inline cxd z_in_upper_half(Rng& rng) {
    return cxd(rng.uniform(-2.5, 2.5), std::exp(rng.uniform(std::log(5e-3), std::log(50.0))));
}

}  // namespace dissop::testing
