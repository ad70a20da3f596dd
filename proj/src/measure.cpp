// measure.cpp
#include "dissop/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dissop {

namespace {

void check_atoms(const std::vector<Atom>& atoms) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(atoms[i].mass > 0.0)) throw InputError("atom mass must be strictly positive");
        if (atoms[i].x < 0.0 || atoms[i].x > 1.0) throw InputError("atom position outside [0,1]");
        if (i > 0 && !(atoms[i].x > atoms[i - 1].x))
            throw InputError("atom positions must be strictly increasing");
    }
}

}  // namespace

void Measure::finalize() {
    check_atoms(atoms_);
    double total = 0.0;
    for (const auto& a : atoms_) total += a.mass;
    for (const auto& c : cells_) {
        if (!(c.weight > 0.0)) throw InputError("quadrature weight must be strictly positive");
        if (!(c.x_lo < c.x && c.x < c.x_hi))
            throw InputError("quadrature node must lie inside its cell");
        total += c.weight;
    }
    for (const auto& c : cells_)
        for (const auto& a : atoms_)
            if (c.x == a.x) throw InputError("quadrature node coincides with an atom");
    total_mass_ = total;
}

Measure Measure::from_atoms(std::vector<Atom> atoms) {
    Measure m;
    m.atoms_ = std::move(atoms);
    m.finalize();
    return m;
}

Measure Measure::from_density(std::vector<Atom> atoms,
                              const std::function<double(double)>& density, int n_cells) {
    if (n_cells < 1) throw InputError("need at least one quadrature cell");
    check_atoms(atoms);

    // Uniform edges split at atom positions so no cell straddles an atom.
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(n_cells) + atoms.size() + 1);
    for (int i = 0; i <= n_cells; ++i) edges.push_back(static_cast<double>(i) / n_cells);
    for (const auto& a : atoms)
        if (a.x > 0.0 && a.x < 1.0) edges.push_back(a.x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Measure m;
    m.atoms_ = std::move(atoms);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        if (hi - lo < 1e-15) continue;
        const double node = 0.5 * (lo + hi);
        const double w = density(node) * (hi - lo);  // midpoint rule per cell
        if (w < 0.0) throw InputError("density must be nonnegative");
        if (w > 0.0) m.cells_.push_back({node, w, lo, hi});
    }
    m.finalize();
    return m;
}

Measure Measure::from_nodes(std::vector<Atom> atoms, std::vector<double> nodes,
                            std::vector<double> weights) {
    if (nodes.size() != weights.size()) throw InputError("nodes/weights length mismatch");
    check_atoms(atoms);
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });

    std::vector<double> xs, ws;
    for (std::size_t i : order) {
        if (nodes[i] < 0.0 || nodes[i] > 1.0) throw InputError("quadrature node outside [0,1]");
        xs.push_back(nodes[i]);
        ws.push_back(weights[i]);
    }
    // Move nodes off atoms by half the local spacing.
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (const auto& a : atoms) {
            if (xs[i] == a.x) {
                double spacing = 1.0;
                if (i + 1 < xs.size()) spacing = std::min(spacing, xs[i + 1] - xs[i]);
                if (i > 0) spacing = std::min(spacing, xs[i] - xs[i - 1]);
                xs[i] = std::min(1.0, xs[i] + 0.5 * spacing);
                if (xs[i] == a.x) xs[i] = std::max(0.0, a.x - 0.5 * spacing);
            }
        }
    }

    // Voronoi cell edges between neighbouring nodes, clipped at atoms and [0,1].
    Measure m;
    m.atoms_ = std::move(atoms);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double lo = (i == 0) ? 0.0 : 0.5 * (xs[i - 1] + xs[i]);
        double hi = (i + 1 == xs.size()) ? 1.0 : 0.5 * (xs[i] + xs[i + 1]);
        for (const auto& a : m.atoms_) {
            if (a.x > lo && a.x < hi) {
                if (a.x < xs[i]) lo = a.x; else hi = a.x;
            }
        }
        if (!(lo < xs[i] && xs[i] < hi)) throw InputError("cannot build a cell around node");
        m.cells_.push_back({xs[i], ws[i], lo, hi});
    }
    m.finalize();
    return m;
}

double Measure::mass_below(double x) const {
    double s = 0.0;
    for (const auto& a : atoms_)
        if (a.x < x) s += a.mass;
    for (const auto& c : cells_) {
        if (c.x_hi <= x) s += c.weight;
        else if (c.x_lo < x) s += c.weight * (x - c.x_lo) / (c.x_hi - c.x_lo);
    }
    return s;
}

double Measure::atom_mass_at(double x) const {
    for (const auto& a : atoms_)
        if (a.x == x) return a.mass;
    return 0.0;
}

double Measure::mass_below_one() const { return total_mass_ - atom_mass_at(1.0); }

double Measure::phi(double x) const {
    if (x < 0.0 || x > 1.0) throw std::domain_error("phi: x outside [0,1]");
    return mass_below(x) + 0.5 * atom_mass_at(x);
}

double Measure::psi(double t) const {
    if (t < 0.0 || t > total_mass_) throw std::domain_error("psi: t outside [0,M]");
    if (t >= mass_below_one()) return 1.0;
    double cum = 0.0;
    std::size_t ia = 0, ic = 0;
    while (ia < atoms_.size() || ic < cells_.size()) {
        const bool take_atom =
            ia < atoms_.size() && (ic >= cells_.size() || atoms_[ia].x < cells_[ic].x);
        if (take_atom) {
            // mu([0,y)) jumps past t at y = atom position: psi == x on the interval
            if (cum + atoms_[ia].mass > t) return atoms_[ia].x;
            cum += atoms_[ia].mass;
            ++ia;
        } else {
            const auto& c = cells_[ic];
            if (cum + c.weight > t)
                return c.x_lo + (t - cum) / c.weight * (c.x_hi - c.x_lo);
            cum += c.weight;
            ++ic;
        }
    }
    return 1.0;
}

double Measure::integrate_cells_below(double x, const std::function<double(int)>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto& c = cells_[i];
        if (c.x_hi <= x) s += c.weight * f(static_cast<int>(i));
        else if (c.x_lo < x)
            s += c.weight * (x - c.x_lo) / (c.x_hi - c.x_lo) * f(static_cast<int>(i));
    }
    return s;
}

StarGrid::StarGrid(const Measure& m) {
    total_mass_ = m.total_mass();
    double cum = 0.0;
    std::size_t ia = 0, ic = 0;
    const auto& atoms = m.atoms();
    const auto& cells = m.cells();
    Stretch current;
    bool stretch_open = false;
    auto close_stretch = [&]() {
        if (stretch_open) {
            current.t_lo = current.cells.front().t_lo;
            current.t_hi = current.cells.back().t_hi;
            segments_.push_back({false, static_cast<int>(stretches_.size()), current.t_lo,
                                 current.t_hi});
            stretches_.push_back(std::move(current));
            current = Stretch{};
            stretch_open = false;
        }
    };
    while (ia < atoms.size() || ic < cells.size()) {
        const bool take_atom =
            ia < atoms.size() && (ic >= cells.size() || atoms[ia].x < cells[ic].x);
        if (take_atom) {
            close_stretch();
            const auto& a = atoms[ia];
            AtomInterval iv;
            iv.atom_index = static_cast<int>(ia);
            iv.x = a.x;
            iv.mass = a.mass;
            iv.t_lo = cum;
            iv.t_mid = cum + 0.5 * a.mass;
            iv.t_hi = cum + a.mass;
            segments_.push_back({true, static_cast<int>(atom_intervals_.size()), iv.t_lo, iv.t_hi});
            atom_intervals_.push_back(iv);
            cum = iv.t_hi;
            ++ia;
        } else {
            const auto& c = cells[ic];
            CellImage img;
            img.cell_index = static_cast<int>(ic);
            img.x = c.x;
            img.weight = c.weight;
            img.t_lo = cum;
            img.t_mid = cum + 0.5 * c.weight;
            img.t_hi = cum + c.weight;
            current.cells.push_back(img);
            stretch_open = true;
            cum = img.t_hi;
            ++ic;
        }
    }
    close_stretch();
}

const SegmentRef& StarGrid::locate(double t) const {
    if (segments_.empty()) throw InputError("locate on empty StarGrid");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const SegmentRef& s) { return v < s.t_hi; });
    if (it == segments_.end()) return segments_.back();
    return *it;
}

StarGrid build_star_grid(const Measure& m) { return StarGrid(m); }

std::pair<cxd, cxd> star_integral(const Measure& m, const std::vector<cxd>& f_atom,
                                  const std::vector<cxd>& f_cell, double x) {
    if (f_atom.size() != m.atoms().size() || f_cell.size() != m.cells().size())
        throw InputError("star_integral: sample count does not match measure nodes");
    if (x < 0.0 || x > 1.0) throw std::domain_error("star_integral: x outside [0,1]");

    // Left side: int_0^{phi(x)} f_* dt via StarGrid segments clipped at phi(x).
    const double tx = m.phi(x);
    StarGrid grid(m);
    cxd left = 0.0;
    for (const auto& iv : grid.atom_intervals()) {
        const double len = std::max(0.0, std::min(tx, iv.t_hi) - iv.t_lo);
        if (len > 0.0) left += len * f_atom[static_cast<std::size_t>(iv.atom_index)];
    }
    for (const auto& st : grid.stretches())
        for (const auto& c : st.cells) {
            const double len = std::max(0.0, std::min(tx, c.t_hi) - c.t_lo);
            if (len > 0.0) left += len * f_cell[static_cast<std::size_t>(c.cell_index)];
        }

    // Right side: int_{[0,x)} f dmu + 1/2 mu({x}) f(x).
    cxd right = 0.0;
    const auto& atoms = m.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].x < x) right += atoms[i].mass * f_atom[i];
        else if (atoms[i].x == x) right += 0.5 * atoms[i].mass * f_atom[i];
    }
    const auto& cells = m.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        if (c.x_hi <= x) right += c.weight * f_cell[i];
        else if (c.x_lo < x) right += c.weight * (x - c.x_lo) / (c.x_hi - c.x_lo) * f_cell[i];
    }
    return {left, right};
}

}  // namespace dissop
