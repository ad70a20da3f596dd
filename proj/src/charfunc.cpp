// charfunc.cpp
#include "dissop/charfunc.hpp"

#include <algorithm>
#include <cmath>

namespace dissop {

namespace {
const cxd kI(0.0, 1.0);
}

CharSample char_sample_from(const Mat& s, cxd z) {
    CharSample cs;
    cs.z = z;
    cs.S = s;
    cs.det = s.determinant();
    const Mat defect = Mat::Identity(s.rows(), s.cols()) - s.adjoint() * s;
    cs.trace_defect = defect.trace().real();
    return cs;
}

CharSample char_fn(const OperatorSpec& spec, cxd z, const SolveOptions& opt) {
    SolveOptions o = opt;
    o.with_inverse = false;
    return char_sample_from(solve_g(spec, z, o).at_zero(), z);
}

cxd blaschke_factor(cxd z, cxd w) {
    if (!(z.imag() > 0.0)) throw InputError("blaschke_factor: z must lie in C_+");
    return (w - z) / (w - std::conj(z));
}

cxd det_char_fn(const OperatorSpec& spec, cxd z) {
    if (!(z.imag() > 0.0)) throw InputError("det_char_fn requires Im z > 0");
    if (!spec.commutativity_declared() && !spec.measure().atoms().empty())
        throw ModelError(
            "det_char_fn: the atom product form needs the commutativity assumption; "
            "use det of the path solution instead");

    cxd product(1.0, 0.0);
    if (!spec.measure().atoms().empty()) {
        SpectrumData spectrum = atom_eigenvalues(spec);
        std::sort(spectrum.entries.begin(), spectrum.entries.end(),
                  [](const SpectrumEntry& a, const SpectrumEntry& b) {
                      if (a.weight != b.weight) return a.weight > b.weight;
                      if (a.x != b.x) return a.x < b.x;
                      return a.branch < b.branch;
                  });
        // Phase-normalized factors; the unimodular constant soaks the phases
        // back up so the finite product matches det G(0,z) exactly.
        cxd unimodular(1.0, 0.0);
        for (const auto& e : spectrum.entries) {
            product *= std::exp(kI * e.phase) * (z - e.z) / (z - std::conj(e.z));
            unimodular *= std::exp(-kI * e.phase);
        }
        product *= unimodular;
    }
    cxd cont_integral(0.0, 0.0);
    const auto& cells = spec.measure().cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const NodeRef ref{false, static_cast<int>(i)};
        const Mat& c = spec.c_factor(ref);
        Mat shifted = spec.alpha(ref);
        shifted.diagonal().array() -= z;
        const Mat rc = shifted.partialPivLu().solve(c);
        cont_integral += cells[i].weight * (c.adjoint() * rc).trace();
    }
    return product * std::exp(kI * cont_integral);
}

namespace {

Mat blaschke_potapov_factor(const OperatorSpec& spec, int atom_index, cxd z) {
    const NodeRef ref{true, atom_index};
    const Mat& c = spec.c_factor(ref);
    Mat shifted = spec.alpha(ref);
    shifted.diagonal().array() -= z;
    const Mat w = c.adjoint() * shifted.partialPivLu().solve(c);
    const double mass = spec.measure().atoms()[static_cast<std::size_t>(atom_index)].mass;
    const int r = spec.rank();
    const Mat plus = Mat::Identity(r, r) + kI * 0.5 * mass * w;
    const Mat minus = Mat::Identity(r, r) - kI * 0.5 * mass * w;
    return minus.transpose().partialPivLu().solve(plus.transpose()).transpose();
}

}  // namespace

Factorization factorize(const OperatorSpec& spec, int atom_index, cxd z,
                        const SolveOptions& opt) {
    const auto& atoms = spec.measure().atoms();
    if (atom_index < 0 || atom_index >= static_cast<int>(atoms.size()))
        throw InputError("factorize: not an atom of the measure");
    SolveOptions o = opt;
    o.with_inverse = true;
    const GPath path = solve_g(spec, z, o);
    const auto& br = path.atom_breaks[static_cast<std::size_t>(atom_index)];
    Factorization f;
    f.left = path.at_zero() * path.inverse_values[static_cast<std::size_t>(br[0])];
    f.blaschke = blaschke_potapov_factor(spec, atom_index, z);
    f.right = path.values[static_cast<std::size_t>(br[2])];
    return f;
}

std::vector<Mat> chain_factorize(const OperatorSpec& spec, const std::vector<int>& atom_indices,
                                 cxd z, const SolveOptions& opt) {
    const auto& atoms = spec.measure().atoms();
    if (atom_indices.empty()) throw InputError("chain_factorize: empty atom set");
    for (std::size_t i = 0; i < atom_indices.size(); ++i) {
        if (atom_indices[i] < 0 || atom_indices[i] >= static_cast<int>(atoms.size()))
            throw InputError("chain_factorize: not an atom of the measure");
        if (i > 0 && atom_indices[i] <= atom_indices[i - 1])
            throw InputError("chain_factorize: atoms must be strictly increasing");
    }
    SolveOptions o = opt;
    o.with_inverse = true;
    const GPath path = solve_g(spec, z, o);
    auto lo_inv = [&](int a) -> const Mat& {
        return path.inverse_values[static_cast<std::size_t>(
            path.atom_breaks[static_cast<std::size_t>(a)][0])];
    };
    auto hi_val = [&](int a) -> const Mat& {
        return path.values[static_cast<std::size_t>(
            path.atom_breaks[static_cast<std::size_t>(a)][2])];
    };
    std::vector<Mat> factors;
    factors.push_back(path.at_zero() * lo_inv(atom_indices.front()));  // S_{x_1 -}
    for (std::size_t i = 0; i < atom_indices.size(); ++i) {
        factors.push_back(blaschke_potapov_factor(spec, atom_indices[i], z));
        if (i + 1 < atom_indices.size())
            factors.push_back(hi_val(atom_indices[i]) * lo_inv(atom_indices[i + 1]));  // S_{a,b}
    }
    factors.push_back(hi_val(atom_indices.back()));  // S_{x_n +}
    return factors;
}

std::vector<std::pair<cxd, int>> clustered_eigenvalues(const SpectrumData& spectrum) {
    std::vector<std::pair<cxd, int>> out;
    std::vector<bool> used(spectrum.entries.size(), false);
    for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
        if (used[i]) continue;
        cxd sum = 0.0;
        int count = 0;
        for (std::size_t j = i; j < spectrum.entries.size(); ++j) {
            if (!used[j] &&
                std::abs(spectrum.entries[j].z - spectrum.entries[i].z) <= kEigenClusterTol) {
                used[j] = true;
                sum += spectrum.entries[j].z;
                ++count;
            }
        }
        out.emplace_back(sum / static_cast<double>(count), count);
    }
    return out;
}

KernelInfo kernel_at(const OperatorSpec& spec, cxd lambda, const SolveOptions& opt) {
    const SpectrumData spectrum = atom_eigenvalues(spec);
    int multiplicity = 0;
    for (const auto& e : spectrum.entries)
        if (std::abs(e.z - lambda) <= kEigenClusterTol) ++multiplicity;
    if (multiplicity == 0)
        throw InputError("kernel_at: lambda is not an eigenvalue of the spec");

    const CharSample cs = char_fn(spec, lambda, opt);
    const auto sv = cs.S.jacobiSvd().singularValues();
    const double smax = sv(0);
    KernelInfo info;
    info.multiplicity = multiplicity;
    // ||S|| <= 1, so an all-tiny S (below solver resolution) is the full kernel.
    if (smax <= 1e-7) {
        info.dim_kernel = static_cast<int>(sv.size());
    } else {
        info.dim_kernel = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) < kKernelSvRelTol * smax) ++info.dim_kernel;
    }
    info.root_vector_free = info.dim_kernel == info.multiplicity;
    return info;
}

}  // namespace dissop
