// measure.hpp - finite positive measure on [0,1] and its mass-coordinate machinery
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "dissop/types.hpp"

namespace dissop {

struct Atom {
    double x;     // position in [0,1]
    double mass;  // > 0
};

// One quadrature cell of the continuous part: the cell [x_lo, x_hi] carries
// total mass `weight`, sampled at the node `x`.  The CDF of the continuous
// part is linear across each cell, so the measure stays genuinely continuous.
struct QuadCell {
    double x;       // sample node, x_lo < x < x_hi
    double weight;  // > 0
    double x_lo;
    double x_hi;
};

class StarGrid;

// mu = mu_c + mu_d on [0,1].  Atoms are exact point masses; the continuous
// part is a piecewise-constant density over quadrature cells.  Immutable.
class Measure {
public:
    static Measure from_atoms(std::vector<Atom> atoms);
    // Continuous part from a density, composite-midpoint sampled with n cells
    // over [0,1]; cells are split at atom positions so no cell straddles an atom.
    static Measure from_density(std::vector<Atom> atoms,
                                const std::function<double(double)>& density, int n_cells = 512);
    static Measure lebesgue(int n_cells = 512) {
        return from_density({}, [](double) { return 1.0; }, n_cells);
    }
    // Explicit node/weight pairs; cell edges are taken midway between
    // neighbouring nodes (clipped at atoms and at [0,1]).  Nodes colliding
    // with an atom are moved off it by half the local spacing.
    static Measure from_nodes(std::vector<Atom> atoms,
                              std::vector<double> nodes, std::vector<double> weights);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<QuadCell>& cells() const { return cells_; }
    double total_mass() const { return total_mass_; }
    bool is_atomic() const { return cells_.empty(); }

    // mu([0,x))
    double mass_below(double x) const;
    // mu({x})
    double atom_mass_at(double x) const;
    // mu([0,1))
    double mass_below_one() const;

    // phi(x) = mu([0,x)) + 1/2 mu({x}); throws std::domain_error off [0,1].
    double phi(double x) const;
    // Generalized inverse of the cumulative function; constant across each
    // atom interval, 1 for t >= mu([0,1)).  Throws std::domain_error off [0,M].
    double psi(double t) const;

    // Integral of the continuous density against f over [0,x), f sampled per
    // cell (callback gets the cell index).
    double integrate_cells_below(double x, const std::function<double(int)>& f) const;

private:
    Measure() = default;
    void finalize();

    std::vector<Atom> atoms_;
    std::vector<QuadCell> cells_;
    double total_mass_ = 0.0;
};

// The partition of [0,M] induced by phi: atom intervals [phi(x-0), phi(x+0)]
// and continuous stretches made of quadrature cells.
struct AtomInterval {
    int atom_index;  // into Measure::atoms()
    double x;
    double mass;   // interval length, exactly the atom mass
    double t_lo;   // phi(x-0)
    double t_mid;  // phi(x)
    double t_hi;   // phi(x+0)
};

struct CellImage {
    int cell_index;  // into Measure::cells()
    double x;        // node
    double weight;   // t-length
    double t_lo;
    double t_mid;  // phi(node)
    double t_hi;
};

struct Stretch {
    std::vector<CellImage> cells;
    double t_lo;
    double t_hi;
};

// Ordered walk of [0,M]; is_atom selects atom_intervals[index] vs stretches[index].
struct SegmentRef {
    bool is_atom;
    int index;
    double t_lo;
    double t_hi;
};

class StarGrid {
public:
    explicit StarGrid(const Measure& m);

    const std::vector<AtomInterval>& atom_intervals() const { return atom_intervals_; }
    const std::vector<Stretch>& stretches() const { return stretches_; }
    const std::vector<SegmentRef>& segments() const { return segments_; }
    double total_mass() const { return total_mass_; }

    // Segment containing t (boundaries resolve to the earlier segment's end,
    // matching psi's left-continuity at atom interval starts).
    const SegmentRef& locate(double t) const;

private:
    std::vector<AtomInterval> atom_intervals_;
    std::vector<Stretch> stretches_;
    std::vector<SegmentRef> segments_;
    double total_mass_ = 0.0;
};

StarGrid build_star_grid(const Measure& m);

// Both sides of the change-of-variables identity
//   int_0^{phi(x)} f_*(t) dt  =  int_0^{x+} f dmu
// computed independently: left from StarGrid segment sums, right from direct
// mu-summation with the half-mass convention at x.  f is node-sampled:
// f_atom[i] pairs with atoms()[i], f_cell[i] with cells()[i].
std::pair<cxd, cxd> star_integral(const Measure& m, const std::vector<cxd>& f_atom,
                                  const std::vector<cxd>& f_cell, double x);

}  // namespace dissop
