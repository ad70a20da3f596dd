// problem_io.cpp
#include "dissop/problem_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dissop {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where + ": expected a number");
    return j.get<double>();
}

Measure parse_measure(const json& j) {
    if (!j.is_object()) throw InputError("measure: expected an object");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        if (!j["atoms"].is_array()) throw InputError("measure.atoms: expected an array");
        int idx = 0;
        for (const auto& a : j["atoms"]) {
            const std::string where = "measure.atoms[" + std::to_string(idx++) + "]";
            if (!a.is_object() || !a.contains("x") || !a.contains("mass"))
                throw InputError(where + ": expected {x, mass}");
            const double x = require_number(a["x"], where + ".x");
            const double mass = require_number(a["mass"], where + ".mass");
            if (!(mass > 0.0)) throw InputError(where + ".mass: must be > 0");
            atoms.push_back({x, mass});
        }
    }
    if (!j.contains("continuous") || j["continuous"].is_null())
        return Measure::from_atoms(std::move(atoms));

    const json& c = j["continuous"];
    if (!c.is_object()) throw InputError("measure.continuous: expected an object");
    if (c.contains("nodes")) {
        if (!c.contains("weights"))
            throw InputError("measure.continuous: nodes without weights");
        std::vector<double> nodes = c["nodes"].get<std::vector<double>>();
        std::vector<double> weights = c["weights"].get<std::vector<double>>();
        return Measure::from_nodes(std::move(atoms), std::move(nodes), std::move(weights));
    }
    if (!c.contains("density")) throw InputError("measure.continuous: need density or nodes");
    const int cells = c.value("cells", 512);
    const json& d = c["density"];
    if (d.is_string()) {
        if (d.get<std::string>() != "lebesgue")
            throw InputError("measure.continuous.density: unknown density name");
        return Measure::from_density(std::move(atoms), [](double) { return 1.0; }, cells);
    }
    if (d.is_object() && d.contains("poly")) {
        const std::vector<double> coef = d["poly"].get<std::vector<double>>();
        return Measure::from_density(
            std::move(atoms),
            [coef](double x) {
                double v = 0.0, p = 1.0;
                for (double ck : coef) {
                    v += ck * p;
                    p *= x;
                }
                return v;
            },
            cells);
    }
    throw InputError("measure.continuous.density: expected \"lebesgue\" or {poly:[...]}");
}

Mat parse_matrix(const json& j, int rows, int cols, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
        throw InputError(where + ": expected a row-major array of " +
                         std::to_string(rows * cols) + " [re,im] pairs");
    Mat m(rows, cols);
    for (int i = 0; i < rows * cols; ++i) {
        const auto& e = j[static_cast<std::size_t>(i)];
        if (!e.is_array() || e.size() != 2)
            throw InputError(where + "[" + std::to_string(i) + "]: expected [re, im]");
        m(i / cols, i % cols) = cxd(require_number(e[0], where), require_number(e[1], where));
    }
    return m;
}

// Coefficient source: explicit per-node arrays, a constant matrix, or a
// scalar polynomial in x.
struct CoefficientRule {
    enum class Kind { per_node, constant, scalar_poly } kind;
    std::vector<json> per_node;
    Mat constant;
    std::vector<double> poly;

    Mat at(double x, int rows, int cols, std::size_t node_index, const std::string& where) const {
        switch (kind) {
            case Kind::constant:
                return constant;
            case Kind::scalar_poly: {
                double v = 0.0, p = 1.0;
                for (double ck : poly) {
                    v += ck * p;
                    p *= x;
                }
                if (rows != 1 || cols != 1)
                    throw InputError(where + ": scalar_poly needs dim 1x1");
                return Mat::Constant(1, 1, cxd(v, 0.0));
            }
            default:
                if (node_index >= per_node.size())
                    throw InputError(where + ": not enough per-node entries");
                return parse_matrix(per_node[node_index], rows, cols,
                                    where + "[" + std::to_string(node_index) + "]");
        }
    }
};

CoefficientRule parse_rule(const json& j, const std::string& where) {
    CoefficientRule rule;
    if (j.is_array()) {
        rule.kind = CoefficientRule::Kind::per_node;
        for (const auto& e : j) rule.per_node.push_back(e);
        return rule;
    }
    if (j.is_object() && j.contains("scalar_poly")) {
        rule.kind = CoefficientRule::Kind::scalar_poly;
        rule.poly = j["scalar_poly"].get<std::vector<double>>();
        return rule;
    }
    throw InputError(where + ": expected per-node arrays or {scalar_poly:[...]}");
}

OperatorSpec parse_operator(const json& doc, Measure measure) {
    if (!doc.contains("operator")) throw InputError("document: missing operator block");
    const json& op = doc["operator"];
    const int n = op.value("dim_h", 1);
    const int r = op.value("rank", 1);
    const bool commut = op.value("commutativity", false);

    // Per-block coefficient sources; "atoms"/"continuous" hold objects with
    // alpha and c, or the top level gives one rule for all nodes.
    auto block_rules = [&](const char* key, std::size_t count)
        -> std::pair<CoefficientRule, CoefficientRule> {
        if (op.contains(key)) {
            const json& b = op[key];
            if (b.is_array()) {
                // array of {alpha: [...], c: [...]} per node
                CoefficientRule ra, rc;
                ra.kind = rc.kind = CoefficientRule::Kind::per_node;
                int idx = 0;
                for (const auto& e : b) {
                    const std::string where =
                        std::string("operator.") + key + "[" + std::to_string(idx++) + "]";
                    if (!e.is_object() || !e.contains("alpha") || !e.contains("c"))
                        throw InputError(where + ": expected {alpha, c}");
                    ra.per_node.push_back(e["alpha"]);
                    rc.per_node.push_back(e["c"]);
                }
                return {ra, rc};
            }
            if (b.is_object() && b.contains("alpha") && b.contains("c"))
                return {parse_rule(b["alpha"], std::string("operator.") + key + ".alpha"),
                        parse_rule(b["c"], std::string("operator.") + key + ".c")};
            throw InputError(std::string("operator.") + key + ": malformed block");
        }
        if (op.contains("alpha") && op.contains("c"))
            return {parse_rule(op["alpha"], "operator.alpha"),
                    parse_rule(op["c"], "operator.c")};
        if (count > 0)
            throw InputError(std::string("operator: no coefficients for ") + key);
        return {CoefficientRule{CoefficientRule::Kind::per_node, {}, {}, {}},
                CoefficientRule{CoefficientRule::Kind::per_node, {}, {}, {}}};
    };

    const auto [atom_alpha, atom_c] = block_rules("atoms", measure.atoms().size());
    const auto [cell_alpha, cell_c] = block_rules("continuous", measure.cells().size());

    std::vector<Mat> aa, ca, ac, cc;
    for (std::size_t i = 0; i < measure.atoms().size(); ++i) {
        const double x = measure.atoms()[i].x;
        aa.push_back(atom_alpha.at(x, n, n, i, "operator.atoms.alpha"));
        ca.push_back(atom_c.at(x, n, r, i, "operator.atoms.c"));
    }
    for (std::size_t i = 0; i < measure.cells().size(); ++i) {
        const double x = measure.cells()[i].x;
        ac.push_back(cell_alpha.at(x, n, n, i, "operator.continuous.alpha"));
        cc.push_back(cell_c.at(x, n, r, i, "operator.continuous.c"));
    }
    return OperatorSpec(std::move(measure), n, r, std::move(aa), std::move(ca), std::move(ac),
                        std::move(cc), commut);
}

RunConfig parse_run(const json& doc) {
    RunConfig run;
    if (!doc.contains("run")) return run;
    const json& r = doc["run"];
    if (r.contains("zgrid")) {
        const json& g = r["zgrid"];
        run.zgrid = ZGrid::make(require_number(g.at("re_min"), "run.zgrid.re_min"),
                                require_number(g.at("re_max"), "run.zgrid.re_max"),
                                require_number(g.at("im_min"), "run.zgrid.im_min"),
                                require_number(g.at("im_max"), "run.zgrid.im_max"),
                                g.value("nx", 64), g.value("ny", 64));
        run.criteria.grid_nx = g.value("nx", 64);
        run.criteria.grid_ny = g.value("ny", 64);
    }
    if (r.contains("z_list")) {
        for (const auto& e : r["z_list"]) {
            if (!e.is_array() || e.size() != 2) throw InputError("run.z_list: expected [re,im] pairs");
            run.z_list.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
    }
    run.tol = r.value("tol", kOdeTol);
    run.criteria.density_bins = r.value("bins", 64);
    run.criteria.sparse_threshold = r.value("sparse_threshold", 1e-3);
    return run;
}

}  // namespace

ProblemDocument parse_problem(const std::string& json_text) {
    const json doc = json::parse(json_text);
    if (!doc.contains("measure")) throw InputError("document: missing measure block");
    Measure m = parse_measure(doc["measure"]);
    OperatorSpec spec = parse_operator(doc, std::move(m));
    return ProblemDocument{std::move(spec), parse_run(doc)};
}

ProblemDocument load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

Diagnostics validate_problem(const std::string& path) {
    Diagnostics d;
    try {
        const ProblemDocument doc = load_problem(path);
        const OperatorSpec& spec = doc.spec;
        for (int i = 0; i < spec.node_count(); ++i) {
            const NodeRef ref = spec.node(i);
            const Mat& a = spec.alpha(ref);
            const double h = (a - a.adjoint()).cwiseAbs().maxCoeff();
            d.hermitian_defect = std::max(d.hermitian_defect, h);
        }
        d.commutativity = commutativity_defect(spec);
        d.trace_integral = spec.trace_kernel_integral();
        d.notes.push_back("nodes: " + std::to_string(spec.node_count()));
        d.notes.push_back("dim_h: " + std::to_string(spec.dim_h()) +
                          ", rank: " + std::to_string(spec.rank()));
        if (!std::isfinite(d.trace_integral))
            d.errors.push_back("trace integral of the kernel is not finite");
    } catch (const std::exception& e) {
        d.errors.push_back(e.what());
    }
    d.ok = d.errors.empty();
    return d;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_row(const std::vector<double>& values) {
    std::string row;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) row += ',';
        row += format_double(values[i]);
    }
    row += '\n';
    return row;
}

std::string criteria_report_json(const CriteriaReport& rep) {
    nlohmann::ordered_json j;
    auto num = [](double v) -> nlohmann::ordered_json {
        if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
        return v;
    };
    j["C1"] = num(rep.c1);
    j["C2_trace"] = num(rep.c2_trace);
    j["C2_integral"] = num(rep.c2_integral);
    j["C3"] = num(rep.c3);
    j["C3_skipped_points"] = rep.c3_skipped;
    j["carleson_sup"] = num(rep.carleson);
    j["sparse_inf"] = num(rep.sparse_inf);
    j["sparse_duplicates"] = rep.sparse_duplicates;
    j["n_sparse"] = rep.n_sparse;
    j["nu_c_density_sup"] = num(rep.nu_c_sup);
    j["nu_c_flag"] = to_string(rep.nu_c_flag);
    j["nu_c_growth"] = num(rep.nu_c_growth);
    j["nu_dh_sup"] = num(rep.nu_dh);
    j["nu_dh_flag"] = to_string(rep.nu_dh_flag);
    j["nu_h_sup"] = num(rep.nu_h);
    j["sing_outer_inf"] = num(rep.sing_outer);
    j["verdict_2_5"] = to_string(rep.verdict_2_5);
    j["reason_2_5"] = rep.reason_2_5;
    j["verdict_2_6"] = to_string(rep.verdict_2_6);
    j["reason_2_6"] = rep.reason_2_6;
    return j.dump(2) + "\n";
}

}  // namespace dissop
