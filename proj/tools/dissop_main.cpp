// dissop_main.cpp - command-line front end: validate problem documents, run the
// characteristic-function and determinant sweeps, the criteria report, and the
// oracle comparison.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "dissop/charfunc.hpp"
#include "dissop/criteria.hpp"
#include "dissop/oracle.hpp"
#include "dissop/problem_io.hpp"

#include <json.hpp>

namespace {

using namespace dissop;

std::vector<cxd> sweep_points(const ProblemDocument& doc) {
    if (!doc.run.z_list.empty()) return doc.run.z_list;
    if (doc.run.zgrid) return doc.run.zgrid->points();
    return ZGrid::for_spec(doc.spec, 16, 16).points();
}

void write_out(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write " + out_path);
        out << text;
    }
}

int verdict_exit(const ProblemDocument& doc, const CriteriaReport& rep) {
    const Verdict v = doc.spec.rank() == 1 ? rep.verdict_2_6 : rep.verdict_2_5;
    if (v == Verdict::holds) return 0;
    if (v == Verdict::fails) return 2;
    return 3;
}

int cmd_validate(const std::string& path) {
    const Diagnostics d = validate_problem(path);
    for (const auto& n : d.notes) std::cout << "note: " << n << "\n";
    std::cout << "hermitian_defect: " << format_double(d.hermitian_defect) << "\n";
    std::cout << "commutativity_defect: " << format_double(d.commutativity) << "\n";
    std::cout << "trace_kernel_integral: " << format_double(d.trace_integral) << "\n";
    for (const auto& e : d.errors) std::cout << "error: " << e << "\n";
    std::cout << (d.ok ? "ok" : "invalid") << "\n";
    return d.ok ? 0 : 1;
}

int cmd_charfn(const ProblemDocument& doc, const std::string& out) {
    SolveOptions opt;
    opt.abs_tol = opt.rel_tol = doc.run.tol;
    std::string csv = "re_z,im_z";
    const int r = doc.spec.rank();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            csv += ",re_S" + std::to_string(i) + std::to_string(j) + ",im_S" +
                   std::to_string(i) + std::to_string(j);
    csv += ",re_det,im_det,trace_defect\n";
    for (const cxd& z : sweep_points(doc)) {
        std::vector<double> row{z.real(), z.imag()};
        try {
            const CharSample s = char_fn(doc.spec, z, opt);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) {
                    row.push_back(s.S(i, j).real());
                    row.push_back(s.S(i, j).imag());
                }
            row.push_back(s.det.real());
            row.push_back(s.det.imag());
            row.push_back(s.trace_defect);
            csv += csv_row(row);
        } catch (const SingularityError&) {
            csv += format_double(z.real()) + "," + format_double(z.imag()) + ",solver_error\n";
        }
    }
    write_out(csv, out);
    return 0;
}

int cmd_det(const ProblemDocument& doc, const std::string& out) {
    SolveOptions opt;
    opt.abs_tol = opt.rel_tol = doc.run.tol;
    std::string csv = "re_z,im_z,re_det,im_det,re_det_path,im_det_path,abs_diff\n";
    for (const cxd& z : sweep_points(doc)) {
        const cxd via_path = char_fn(doc.spec, z, opt).det;
        cxd via_formula = via_path;
        if (doc.spec.commutativity_declared()) via_formula = det_char_fn(doc.spec, z);
        csv += csv_row({z.real(), z.imag(), via_formula.real(), via_formula.imag(),
                        via_path.real(), via_path.imag(), std::abs(via_formula - via_path)});
    }
    write_out(csv, out);
    return 0;
}

int cmd_criteria(const ProblemDocument& doc, const std::string& out) {
    const CriteriaReport rep = evaluate_criteria(doc.spec, doc.run.criteria);
    write_out(criteria_report_json(rep), out);
    return verdict_exit(doc, rep);
}

int cmd_oracle(const ProblemDocument& doc, const std::string& out) {
    if (!doc.spec.measure().is_atomic()) {
        std::cerr << "oracle comparison requires a purely atomic measure\n";
        return 1;
    }
    SolveOptions opt;
    opt.abs_tol = opt.rel_tol = doc.run.tol;
    double ds = 0.0, ddet = 0.0, dres = 0.0;
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    for (const cxd& z : sweep_points(doc)) {
        const Mat s_path = solve_g(doc.spec, z, opt).at_zero();
        const Mat s_direct = direct_char_fn(doc.spec, z);
        ds = std::max(ds, (s_path - s_direct).cwiseAbs().maxCoeff());
        ddet = std::max(ddet, std::abs(s_path.determinant() - s_direct.determinant()));
        std::vector<Vec> h;
        for (int i = 0; i < doc.spec.node_count(); ++i) {
            Vec v(doc.spec.dim_h());
            for (int k = 0; k < v.size(); ++k) v(k) = cxd(gauss(rng), gauss(rng));
            h.push_back(v);
        }
        const auto f1 = resolvent_apply(doc.spec, z, h, opt).f;
        const auto f2 = direct_resolvent(doc.spec, z, h);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            num += (f1[i] - f2[i]).squaredNorm();
            den += f2[i].squaredNorm();
        }
        dres = std::max(dres, std::sqrt(num / std::max(den, 1e-300)));
    }
    nlohmann::ordered_json j;
    j["max_abs_diff_S"] = ds;
    j["max_abs_diff_det"] = ddet;
    j["max_rel_diff_resolvent"] = dres;
    write_out(j.dump(2) + "\n", out);
    return 0;
}

int cmd_report(const std::string& path, const ProblemDocument& doc, const std::string& out) {
    nlohmann::ordered_json j;
    const Diagnostics d = validate_problem(path);
    j["valid"] = d.ok;
    j["hermitian_defect"] = d.hermitian_defect;
    j["commutativity_defect"] = d.commutativity;
    j["trace_kernel_integral"] = d.trace_integral;
    const CriteriaReport rep = evaluate_criteria(doc.spec, doc.run.criteria);
    j["criteria"] = nlohmann::ordered_json::parse(criteria_report_json(rep));
    if (doc.spec.measure().is_atomic()) {
        const OracleResult orc = normal_similarity_check(doc.spec);
        j["oracle"]["normal"] = orc.normal;
        j["oracle"]["diagonalizable"] = orc.diagonalizable;
        j["oracle"]["eigenbasis_condition"] = orc.eigenbasis_condition;
        j["oracle"]["commutation_defect"] = orc.commutation_defect;
    }
    write_out(j.dump(2) + "\n", out);
    return verdict_exit(doc, rep);
}

ZGrid parse_zgrid_arg(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 6) throw InputError("--zgrid expects re_min,re_max,im_min,im_max,nx,ny");
    return ZGrid::make(v[0], v[1], v[2], v[3], static_cast<int>(v[4]), static_cast<int>(v[5]));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative integral operator toolkit"};
    app.require_subcommand(1);

    std::string path, out, zgrid_arg;
    double tol = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("document", path, "problem-spec JSON document")->required();
        cmd->add_option("--out", out, "output file (default stdout)");
        cmd->add_option("--tol", tol, "solver tolerance override");
        cmd->add_option("--zgrid", zgrid_arg, "re_min,re_max,im_min,im_max,nx,ny");
    };

    auto* validate = app.add_subcommand("validate", "schema and invariant check");
    validate->add_option("document", path)->required();
    auto* charfn = app.add_subcommand("charfn", "characteristic function sweep (CSV)");
    add_common(charfn);
    auto* det = app.add_subcommand("det", "determinant sweep, formula vs path (CSV)");
    add_common(det);
    auto* criteria = app.add_subcommand("criteria", "full criteria report (JSON)");
    add_common(criteria);
    auto* oracle = app.add_subcommand("oracle", "oracle-vs-solver comparison (JSON)");
    add_common(oracle);
    auto* report = app.add_subcommand("report", "validation + criteria + oracle (JSON)");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(path);
        ProblemDocument doc = load_problem(path);
        if (!zgrid_arg.empty()) {
            doc.run.zgrid = parse_zgrid_arg(zgrid_arg);
            doc.run.z_list.clear();
        }
        if (tol > 0.0) doc.run.tol = tol;
        if (charfn->parsed()) return cmd_charfn(doc, out);
        if (det->parsed()) return cmd_det(doc, out);
        if (criteria->parsed()) return cmd_criteria(doc, out);
        if (oracle->parsed()) return cmd_oracle(doc, out);
        if (report->parsed()) return cmd_report(path, doc, out);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
