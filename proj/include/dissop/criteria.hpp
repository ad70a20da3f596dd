// criteria.hpp - similarity tests: resolvent-growth and trace-boundedness
// constants, Carleson/sparse geometry of the point spectrum, the push-forward
// measures on the real line with their density conditions, and the combined
// verdicts.
#pragma once

#include <string>
#include <vector>

#include "dissop/charfunc.hpp"
#include "dissop/operator_model.hpp"
#include "dissop/types.hpp"

namespace dissop {

// Deterministic sample grid in C_+: uniform real parts, log-spaced imaginary
// parts.  All suprema below are grid maxima, i.e. certified lower bounds.
struct ZGrid {
    std::vector<double> re;
    std::vector<double> im;

    static ZGrid make(double re_min, double re_max, double im_min, double im_max, int nx, int ny);
    // Spectral-scale defaults: real parts padded by one spectral diameter,
    // imaginary floor lowered to half the smallest eigenvalue height.
    static ZGrid for_spec(const OperatorSpec& spec, int nx = 64, int ny = 64);

    std::vector<cxd> points() const;
};

enum class Boundedness { bounded, unbounded, inconclusive, inapplicable };
enum class Verdict { holds, fails, inconclusive, inapplicable };

std::string to_string(Boundedness b);
std::string to_string(Verdict v);

double lrg_constant(const OperatorSpec& spec, const ZGrid& grid);

// sup over the grid of tr(I - S^*S): dense trace formula on atomic specs,
// path solution otherwise.
double utb_constant_trace(const OperatorSpec& spec, const ZGrid& grid);

// The path-integral route: 2 sup Im z int ||(alpha-z)^{-1} c G(phi(x),z)||_HS^2 dmu.
double utb_constant_integral(const OperatorSpec& spec, const ZGrid& grid);

struct C3Result {
    double value;
    int skipped;  // grid points where S was numerically singular
};
C3Result c3_constant(const OperatorSpec& spec, const ZGrid& grid);

// sup over the grid of sum_k Im z Im z_k / |z - conj z_k|^2.
double carleson_sup(const std::vector<cxd>& points, const ZGrid& grid);

// sup over squares Q = [x0-h, x0+h] x i[0,2h] of sigma(Q)/h with
// sigma = sum Im z_k delta_{z_k}.
double carleson_square(const std::vector<cxd>& points, const std::vector<double>& h_grid,
                       const std::vector<double>& x_grid);
double carleson_square(const std::vector<cxd>& points);

struct SparseResult {
    double constant;      // inf over pairs of |b_{z_k}(z_j)|; +inf when no pairs
    bool has_duplicates;
};
SparseResult sparse_constant(const std::vector<cxd>& points);

// Greedy first-fit partition into eps-sparse classes over points sorted by
// descending Im z; upper bound on the minimal N.
int n_sparse_decompose(const std::vector<cxd>& points, double eps);

// Point masses of the push-forward measure nu_c: (position on R, mass).
std::vector<std::pair<double, double>> nu_c_point_masses(const OperatorSpec& spec);
// Point masses (alpha_j(x), mu_x kappa_j(x)^2) of the atom spectrum.
std::vector<std::pair<double, double>> nu_d_point_masses(const OperatorSpec& spec);

struct NuDensityResult {
    double sup;           // density sup at the base bin width
    double sup_half;      // after one bin halving
    double sup_quarter;   // after two halvings
    double growth;        // sup_quarter / sup
    Boundedness flag;
    std::vector<double> bin_edges;    // base resolution
    std::vector<double> density;
};
NuDensityResult nu_c_density(const OperatorSpec& spec, int bins = 64);

double nu_dh_sup(const OperatorSpec& spec, const std::vector<double>& h_grid,
                 const std::vector<double>& x_grid);
double nu_dh_sup(const OperatorSpec& spec);

double nu_h_sup(const OperatorSpec& spec);

// inf over the grid of exp(-Im z int dnu_c(s)/|s-z|^2); a positive infimum
// certifies the outer-part lower bound.
double sing_outer_bound(const OperatorSpec& spec, const ZGrid& grid);

// Max over the grid of Im z * int dnu_c(s)/|s - z|^2 (Poisson majorant used
// by the trace-boundedness comparison).
double nu_c_poisson_sup(const OperatorSpec& spec, const ZGrid& grid);

struct CriteriaReport {
    double c1 = 0.0;
    double c2_trace = 0.0;
    double c2_integral = 0.0;
    double c3 = 0.0;
    int c3_skipped = 0;
    double carleson = 0.0;
    double sparse_inf = 0.0;
    bool sparse_duplicates = false;
    int n_sparse = 0;
    double nu_c_sup = 0.0;
    Boundedness nu_c_flag = Boundedness::inapplicable;
    double nu_c_growth = 0.0;
    double nu_dh = 0.0;
    Boundedness nu_dh_flag = Boundedness::inapplicable;
    double nu_h = 0.0;
    double sing_outer = 1.0;
    Verdict verdict_2_5 = Verdict::inapplicable;
    Verdict verdict_2_6 = Verdict::inapplicable;
    std::string reason_2_5;
    std::string reason_2_6;
};

struct CriteriaOptions {
    int grid_nx = 64;
    int grid_ny = 64;
    int density_bins = 64;
    double sparse_threshold = 1e-3;  // sparse iff the pairwise infimum exceeds this
    bool with_constants = true;      // C1/C2/C3 sweeps (the costly part)
};

// Runs every test and combines the Theorem-2.5/2.6 style verdicts.
CriteriaReport evaluate_criteria(const OperatorSpec& spec, const CriteriaOptions& opt = {});

}  // namespace dissop
