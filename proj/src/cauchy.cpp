// cauchy.cpp
#include "dissop/cauchy.hpp"

#include <algorithm>
#include <cmath>

namespace dissop {

namespace {

const cxd kI(0.0, 1.0);

double condition_estimate(const Mat& m) {
    const auto sv = m.jacobiSvd().singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

// B A^{-1} via an LU solve on the transposed system.
Mat solve_right(const Mat& a, const Mat& b) {
    return a.transpose().partialPivLu().solve(b.transpose()).transpose();
}

// R(x,z) c = (alpha - z)^{-1} c.
Mat resolvent_times(const Mat& alpha, cxd z, const Mat& rhs) {
    Mat shifted = alpha;
    shifted.diagonal().array() -= z;
    return shifted.partialPivLu().solve(rhs);
}

// Dormand-Prince 5(4) with PI step control.  Integrates x' = f(t,x) from
// t_from to t_to (either direction); State is an Eigen matrix/vector type.
template <typename State, typename Rhs>
State rk45_integrate(State x, double t_from, double t_to, Rhs&& f, double atol, double rtol) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    const double span = t_to - t_from;
    if (span == 0.0) return x;
    const double dir = span > 0.0 ? 1.0 : -1.0;
    double t = t_from;
    double h = span;  // first try: the whole interval
    State k1 = f(t, x);
    int rejects_in_a_row = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        if ((t + h - t_to) * dir > 0.0) h = t_to - t;
        const State k2 = f(t + c2 * h, (x + h * (a21 * k1)).eval());
        const State k3 = f(t + c3 * h, (x + h * (a31 * k1 + a32 * k2)).eval());
        const State k4 = f(t + c4 * h, (x + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
        const State k5 =
            f(t + c5 * h, (x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
        const State k6 =
            f(t + h, (x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
        const State x5 = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = f(t + h, x5);
        const State err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = atol + rtol * std::max(x.cwiseAbs().maxCoeff(),
                                                    x5.cwiseAbs().maxCoeff());
        const double err_norm = err.cwiseAbs().maxCoeff() / scale;
        if (err_norm <= 1.0) {
            t += h;
            x = x5;
            k1 = k7;  // FSAL
            rejects_in_a_row = 0;
            if (t == t_to || std::abs(t - t_to) <= 1e-15 * std::abs(span)) return x;
        } else if (++rejects_in_a_row > 60) {
            throw AccuracyError("step-size control failed to reach local tolerance");
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err_norm, 1e-16), -0.2), 0.2, 5.0);
        h *= factor;
        if (std::abs(h) < 1e-16 * std::max(1.0, std::abs(span)))
            throw AccuracyError("step size underflow in path integrator");
    }
    throw AccuracyError("path integrator exceeded iteration budget");
}

struct NodeCache {
    Mat w;        // c^* R c  (r x r)
    Mat c;        // n x r
    Mat rc;       // R c (n x r)
    double knorm;       // ||k(x,x)||
    double ktrace;      // tr k(x,x) = ||k||_S1 (PSD)
};

NodeCache make_cache(const OperatorSpec& spec, NodeRef ref, cxd z) {
    NodeCache nc;
    nc.c = spec.c_factor(ref);
    nc.rc = resolvent_times(spec.alpha(ref), z, nc.c);
    nc.w = nc.c.adjoint() * nc.rc;
    nc.knorm = [&] {
        const auto sv = nc.c.jacobiSvd().singularValues();
        return sv.size() ? sv(0) * sv(0) : 0.0;
    }();
    nc.ktrace = nc.c.squaredNorm();
    return nc;
}

}  // namespace

Mat omega(const OperatorSpec& spec, double t, cxd z) {
    if (!(z.imag() > 0.0)) throw InputError("omega requires Im z > 0");
    const StarGrid& grid = spec.star_grid();
    if (t < 0.0 || t > grid.total_mass()) throw std::domain_error("omega: t outside [0,M]");
    const SegmentRef seg = grid.locate(t);
    NodeRef ref;
    double beta;
    if (seg.is_atom) {
        const auto& iv = grid.atom_intervals()[seg.index];
        ref = {true, iv.atom_index};
        beta = t - iv.t_mid;  // t - phi_*(t), phi_* constant = phi(x) on the interval
    } else {
        const auto& st = grid.stretches()[seg.index];
        auto it = std::upper_bound(st.cells.begin(), st.cells.end(), t,
                                   [](double v, const CellImage& c) { return v < c.t_hi; });
        if (it == st.cells.end()) --it;
        ref = {false, it->cell_index};
        beta = 0.0;  // phi_*(t) = t on continuous stretches
    }
    const Mat& c = spec.c_factor(ref);
    Mat bracket = beta * (c * c.adjoint()) + kI * spec.alpha(ref);
    bracket.diagonal().array() -= kI * z;
    if (condition_estimate(bracket) > kConditionLimit)
        throw SingularityError("Omega bracket numerically singular", t, z);
    return bracket.partialPivLu().solve(Mat::Identity(bracket.rows(), bracket.cols()));
}

Mat generator(const OperatorSpec& spec, double t, cxd z) {
    if (!(z.imag() > 0.0)) throw InputError("generator requires Im z > 0");
    const StarGrid& grid = spec.star_grid();
    if (t < 0.0 || t > grid.total_mass()) throw std::domain_error("generator: t outside [0,M]");
    const SegmentRef seg = grid.locate(t);
    NodeRef ref;
    double beta;
    if (seg.is_atom) {
        const auto& iv = grid.atom_intervals()[seg.index];
        ref = {true, iv.atom_index};
        beta = t - iv.t_mid;
    } else {
        const auto& st = grid.stretches()[seg.index];
        auto it = std::upper_bound(st.cells.begin(), st.cells.end(), t,
                                   [](double v, const CellImage& c) { return v < c.t_hi; });
        if (it == st.cells.end()) --it;
        ref = {false, it->cell_index};
        beta = 0.0;
    }
    const Mat& c = spec.c_factor(ref);
    const Mat w = c.adjoint() * resolvent_times(spec.alpha(ref), z, c);
    const int r = spec.rank();
    const Mat denom = Mat::Identity(r, r) - kI * beta * w;
    if (condition_estimate(denom) > kConditionLimit)
        throw SingularityError("generator denominator numerically singular", t, z);
    return -kI * solve_right(denom, w);
}

namespace {

struct SweepRecorder {
    GPath path;                       // filled in descending t order, reversed at the end
    std::vector<double> knorm_tail;   // parallel to records
    std::vector<double> ktrace_tail;
    double cur_knorm = 0.0;
    double cur_ktrace = 0.0;

    int record(double t, Mat g, Mat y) {
        path.breakpoints.push_back(t);
        path.values.push_back(std::move(g));
        path.inverse_values.push_back(std::move(y));
        knorm_tail.push_back(cur_knorm);
        ktrace_tail.push_back(cur_ktrace);
        return static_cast<int>(path.breakpoints.size()) - 1;
    }

    void finish(int n_atoms, int n_cells) {
        const int last = static_cast<int>(path.breakpoints.size()) - 1;
        std::reverse(path.breakpoints.begin(), path.breakpoints.end());
        std::reverse(path.values.begin(), path.values.end());
        std::reverse(path.inverse_values.begin(), path.inverse_values.end());
        std::reverse(knorm_tail.begin(), knorm_tail.end());
        std::reverse(ktrace_tail.begin(), ktrace_tail.end());
        path.kernel_norm_tail = std::move(knorm_tail);
        path.kernel_trace_tail = std::move(ktrace_tail);
        auto flip = [last](std::array<int, 3>& a) {
            a = {last - a[0], last - a[1], last - a[2]};
        };
        path.atom_breaks.resize(static_cast<std::size_t>(n_atoms));
        path.cell_breaks.resize(static_cast<std::size_t>(n_cells));
        for (auto& a : path.atom_breaks) flip(a);
        for (auto& a : path.cell_breaks) flip(a);
    }
};

}  // namespace

GPath solve_g(const OperatorSpec& spec, cxd z, const SolveOptions& opt) {
    if (!(z.imag() > 0.0)) throw InputError("solve_g requires Im z > 0");
    const StarGrid& grid = spec.star_grid();
    const int r = spec.rank();
    const Mat id = Mat::Identity(r, r);

    SweepRecorder rec;
    rec.path.z = z;
    rec.path.atom_breaks.assign(spec.measure().atoms().size(), {0, 0, 0});
    rec.path.cell_breaks.assign(spec.measure().cells().size(), {0, 0, 0});

    Mat g = id;
    Mat y = id;
    int above = rec.record(grid.total_mass(), g, y);

    const auto& segs = grid.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        if (it->is_atom) {
            const auto& iv = grid.atom_intervals()[it->index];
            const NodeRef ref{true, iv.atom_index};
            const NodeCache nc = make_cache(spec, ref, z);
            const Mat l_half = id - kI * (0.5 * iv.mass) * nc.w;
            const Mat p_half = id + kI * (0.5 * iv.mass) * nc.w;
            // G(phi(x)) = [I - i/2 mu W]^{-1} G(phi(x+0)); invertible for Im z > 0
            g = l_half.partialPivLu().solve(g);
            if (opt.with_inverse) y = y * l_half;
            rec.cur_knorm += nc.knorm * (iv.t_hi - iv.t_mid);
            rec.cur_ktrace += nc.ktrace * (iv.t_hi - iv.t_mid);
            const int mid = rec.record(iv.t_mid, g, y);
            g = p_half * g;
            if (opt.with_inverse) {
                if (condition_estimate(p_half) > kConditionLimit)
                    throw SingularityError("inverse path singular on atom interval", iv.t_lo, z);
                y = solve_right(p_half, y);
            }
            rec.cur_knorm += nc.knorm * (iv.t_mid - iv.t_lo);
            rec.cur_ktrace += nc.ktrace * (iv.t_mid - iv.t_lo);
            const int lo = rec.record(iv.t_lo, g, y);
            rec.path.atom_breaks[static_cast<std::size_t>(iv.atom_index)] = {lo, mid, above};
            above = lo;
        } else {
            const auto& st = grid.stretches()[it->index];
            for (auto cit = st.cells.rbegin(); cit != st.cells.rend(); ++cit) {
                const NodeRef ref{false, cit->cell_index};
                const NodeCache nc = make_cache(spec, ref, z);
                const Mat phi_gen = -kI * nc.w;  // t - phi_*(t) = 0 on the stretch
                auto rhs_g = [&](double, const Mat& x) -> Mat { return phi_gen * x; };
                auto rhs_y = [&](double, const Mat& x) -> Mat { return -x * phi_gen; };
                g = rk45_integrate(g, cit->t_hi, cit->t_mid, rhs_g, opt.abs_tol, opt.rel_tol);
                if (opt.with_inverse)
                    y = rk45_integrate(y, cit->t_hi, cit->t_mid, rhs_y, opt.abs_tol, opt.rel_tol);
                rec.cur_knorm += nc.knorm * (cit->t_hi - cit->t_mid);
                rec.cur_ktrace += nc.ktrace * (cit->t_hi - cit->t_mid);
                const int mid = rec.record(cit->t_mid, g, y);
                g = rk45_integrate(g, cit->t_mid, cit->t_lo, rhs_g, opt.abs_tol, opt.rel_tol);
                if (opt.with_inverse)
                    y = rk45_integrate(y, cit->t_mid, cit->t_lo, rhs_y, opt.abs_tol, opt.rel_tol);
                rec.cur_knorm += nc.knorm * (cit->t_mid - cit->t_lo);
                rec.cur_ktrace += nc.ktrace * (cit->t_mid - cit->t_lo);
                const int lo = rec.record(cit->t_lo, g, y);
                rec.path.cell_breaks[static_cast<std::size_t>(cit->cell_index)] = {lo, mid, above};
                above = lo;
            }
        }
    }
    rec.finish(static_cast<int>(spec.measure().atoms().size()),
               static_cast<int>(spec.measure().cells().size()));
    return rec.path;
}

GPath inverse_path(const OperatorSpec& spec, cxd z, const SolveOptions& opt) {
    SolveOptions o = opt;
    o.with_inverse = true;
    return solve_g(spec, z, o);
}

// ---------------------------------------------------------------------------
// Picard iteration with per-segment Gauss-Legendre quadrature.

namespace {

struct GaussLegendre {
    std::vector<double> nodes;    // ascending on (-1,1)
    std::vector<double> weights;
    Eigen::MatrixXd partial;      // partial(i,j): int_{node_i}^{1} of Lagrange_j
};

double legendre(int l, double x, double* dp = nullptr) {
    double p0 = 1.0, p1 = x;
    if (l == 0) {
        if (dp) *dp = 0.0;
        return 1.0;
    }
    for (int k = 2; k <= l; ++k) {
        const double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    if (dp) *dp = l * (x * p1 - p0) / (x * x - 1.0);
    return p1;
}

GaussLegendre gauss_legendre(int m) {
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(m));
    gl.weights.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double dp;
            const double p = legendre(m, x, &dp);
            const double dx = -p / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double dp;
        legendre(m, x, &dp);
        gl.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
        gl.weights[static_cast<std::size_t>(m - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Partial integration matrix: via the Legendre expansion of the
    // interpolant (exact through degree m-1 by Gauss quadrature).
    gl.partial = Eigen::MatrixXd::Zero(m, m);
    for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i) {
            const double x = gl.nodes[static_cast<std::size_t>(i)];
            double il;  // int_x^1 P_l
            if (l == 0) il = 1.0 - x;
            else il = (legendre(l - 1, x) - legendre(l + 1, x)) / (2 * l + 1);
            for (int j = 0; j < m; ++j) {
                const double xj = gl.nodes[static_cast<std::size_t>(j)];
                gl.partial(i, j) += il * (2 * l + 1) * 0.5 *
                                    gl.weights[static_cast<std::size_t>(j)] * legendre(l, xj);
            }
        }
    }
    return gl;
}

struct PicardSegment {
    double lo, hi;
    std::vector<Mat> phi;  // generator at the GL nodes mapped to [lo,hi]
};

}  // namespace

PicardResult solve_g_picard(const OperatorSpec& spec, cxd z, int iterations) {
    if (!(z.imag() > 0.0)) throw InputError("solve_g_picard requires Im z > 0");
    if (iterations < 0) throw InputError("iteration count must be nonnegative");
    const int r = spec.rank();
    const Mat id = Mat::Identity(r, r);
    constexpr int m = 20;
    static const GaussLegendre gl = gauss_legendre(m);

    // One Picard segment per atom interval and per quadrature cell (the
    // generator is analytic on each).
    std::vector<PicardSegment> segs;
    const StarGrid& grid = spec.star_grid();
    // on_atom: beta = t - phi(x); on cells beta = 0 identically.
    auto add_segment = [&](double lo, double hi, const NodeCache& nc, bool on_atom,
                           double t_mid) {
        PicardSegment s;
        s.lo = lo;
        s.hi = hi;
        for (int i = 0; i < m; ++i) {
            const double t =
                0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[static_cast<std::size_t>(i)];
            const double beta = on_atom ? t - t_mid : 0.0;
            const Mat denom = id - kI * beta * nc.w;
            s.phi.push_back(-kI * solve_right(denom, nc.w));
        }
        segs.push_back(std::move(s));
    };
    for (const auto& seg : grid.segments()) {
        if (seg.is_atom) {
            const auto& iv = grid.atom_intervals()[seg.index];
            add_segment(iv.t_lo, iv.t_hi, make_cache(spec, {true, iv.atom_index}, z), true,
                        iv.t_mid);
        } else {
            for (const auto& cell : grid.stretches()[seg.index].cells)
                add_segment(cell.t_lo, cell.t_hi, make_cache(spec, {false, cell.cell_index}, z),
                            false, 0.0);
        }
    }

    const std::size_t nsegs = segs.size();
    std::vector<std::vector<Mat>> x(nsegs, std::vector<Mat>(m, id));  // X_k at GL nodes
    Mat x_at_zero = id;

    for (int k = 0; k < iterations; ++k) {
        // Full-segment integrals of Phi X_k.
        std::vector<Mat> fulls(nsegs, Mat::Zero(r, r));
        for (std::size_t s = 0; s < nsegs; ++s) {
            const double half = 0.5 * (segs[s].hi - segs[s].lo);
            for (int j = 0; j < m; ++j)
                fulls[s] += half * gl.weights[static_cast<std::size_t>(j)] *
                            (segs[s].phi[static_cast<std::size_t>(j)] * x[s][static_cast<std::size_t>(j)]);
        }
        // Suffix sums: integral from segment top to M.
        std::vector<Mat> suffix(nsegs + 1, Mat::Zero(r, r));
        for (std::size_t s = nsegs; s-- > 0;) suffix[s] = suffix[s + 1] + fulls[s];

        std::vector<std::vector<Mat>> xn(nsegs, std::vector<Mat>(m, id));
        for (std::size_t s = 0; s < nsegs; ++s) {
            const double half = 0.5 * (segs[s].hi - segs[s].lo);
            for (int i = 0; i < m; ++i) {
                Mat part = Mat::Zero(r, r);
                for (int j = 0; j < m; ++j)
                    part += half * gl.partial(i, j) *
                            (segs[s].phi[static_cast<std::size_t>(j)] * x[s][static_cast<std::size_t>(j)]);
                xn[s][static_cast<std::size_t>(i)] = id - (part + suffix[s + 1]);
            }
        }
        x.swap(xn);
        x_at_zero = id - suffix[0];
    }

    PicardResult res;
    res.iterate_at_zero = std::move(x_at_zero);
    res.gamma = spec.kernel_norm_integral();
    res.iterations = iterations;
    double term = 1.0;
    for (int j = 1; j <= iterations; ++j) term *= res.gamma / j;
    double tail = 0.0;
    for (int j = iterations + 1; j < iterations + 400; ++j) {
        term *= res.gamma / j;
        tail += term;
        if (term < 1e-18 * (tail + 1e-300)) break;
    }
    res.tail_bound = tail;
    return res;
}

// ---------------------------------------------------------------------------
// Resolvent route.

ResolventResult resolvent_apply(const OperatorSpec& spec, cxd z, const std::vector<Vec>& h,
                                const SolveOptions& opt) {
    if (!(z.imag() > 0.0)) throw InputError("resolvent_apply requires Im z > 0");
    const int nnodes = spec.node_count();
    if (static_cast<int>(h.size()) != nnodes)
        throw InputError("resolvent_apply: h must be sampled at every node");
    const int r = spec.rank();
    const StarGrid& grid = spec.star_grid();

    // Map node order back to atom/cell indices for h lookup.
    std::vector<Vec> h_atom(spec.measure().atoms().size());
    std::vector<Vec> h_cell(spec.measure().cells().size());
    for (int i = 0; i < nnodes; ++i) {
        const NodeRef ref = spec.node(i);
        if (h[static_cast<std::size_t>(i)].size() != spec.dim_h())
            throw InputError("resolvent_apply: h sample has wrong dimension");
        (ref.is_atom ? h_atom : h_cell)[static_cast<std::size_t>(ref.index)] =
            h[static_cast<std::size_t>(i)];
    }

    std::vector<Vec> g_at_phi_atom(h_atom.size());
    std::vector<Vec> g_at_phi_cell(h_cell.size());

    ResolventResult res;
    Vec g = Vec::Zero(r);
    res.g_ts.push_back(grid.total_mass());
    res.g_values.push_back(g);
    const Mat id = Mat::Identity(r, r);

    const auto& segs = grid.segments();
    for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
        if (it->is_atom) {
            const auto& iv = grid.atom_intervals()[it->index];
            const NodeCache nc = make_cache(spec, {true, iv.atom_index}, z);
            const Vec& hx = h_atom[static_cast<std::size_t>(iv.atom_index)];
            const Vec crh = nc.c.adjoint() * resolvent_times(spec.alpha({true, iv.atom_index}), z, hx);
            const Mat l_half = id - kI * (0.5 * iv.mass) * nc.w;
            // g(phi(x)) from g(phi(x+0)); exact affine step
            g = l_half.partialPivLu().solve((g - kI * (0.5 * iv.mass) * crh).eval());
            g_at_phi_atom[static_cast<std::size_t>(iv.atom_index)] = g;
            res.g_ts.push_back(iv.t_mid);
            res.g_values.push_back(g);
            // g(phi(x-0)) = g(phi) - i/2 mu c^* R [h - c g(phi)]
            g = g - kI * (0.5 * iv.mass) * (crh - nc.w * g);
            res.g_ts.push_back(iv.t_lo);
            res.g_values.push_back(g);
        } else {
            const auto& st = grid.stretches()[it->index];
            for (auto cit = st.cells.rbegin(); cit != st.cells.rend(); ++cit) {
                const NodeCache nc = make_cache(spec, {false, cit->cell_index}, z);
                const Vec& hx = h_cell[static_cast<std::size_t>(cit->cell_index)];
                const Vec psi_term =
                    -kI * (nc.c.adjoint() *
                           resolvent_times(spec.alpha({false, cit->cell_index}), z, hx));
                const Mat phi_gen = -kI * nc.w;
                auto rhs = [&](double, const Vec& v) -> Vec { return phi_gen * v - psi_term; };
                g = rk45_integrate(g, cit->t_hi, cit->t_mid, rhs, opt.abs_tol, opt.rel_tol);
                g_at_phi_cell[static_cast<std::size_t>(cit->cell_index)] = g;
                res.g_ts.push_back(cit->t_mid);
                res.g_values.push_back(g);
                g = rk45_integrate(g, cit->t_mid, cit->t_lo, rhs, opt.abs_tol, opt.rel_tol);
                res.g_ts.push_back(cit->t_lo);
                res.g_values.push_back(g);
            }
        }
    }

    std::reverse(res.g_ts.begin(), res.g_ts.end());
    std::reverse(res.g_values.begin(), res.g_values.end());
    res.g_max_norm = 0.0;
    for (const auto& v : res.g_values) res.g_max_norm = std::max(res.g_max_norm, v.norm());

    // f(x) = [alpha(x) - z]^{-1} [h(x) - c(x) g(phi(x), z)]
    res.f.resize(static_cast<std::size_t>(nnodes));
    for (int i = 0; i < nnodes; ++i) {
        const NodeRef ref = spec.node(i);
        const Vec& hx = ref.is_atom ? h_atom[static_cast<std::size_t>(ref.index)]
                                    : h_cell[static_cast<std::size_t>(ref.index)];
        const Vec& gx = ref.is_atom ? g_at_phi_atom[static_cast<std::size_t>(ref.index)]
                                    : g_at_phi_cell[static_cast<std::size_t>(ref.index)];
        res.f[static_cast<std::size_t>(i)] =
            resolvent_times(spec.alpha(ref), z, (hx - spec.c_factor(ref) * gx).eval());
    }
    return res;
}

}  // namespace dissop
