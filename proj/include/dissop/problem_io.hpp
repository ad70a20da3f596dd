// problem_io.hpp - problem-spec JSON documents, report serialization, CSV dumps
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dissop/criteria.hpp"
#include "dissop/operator_model.hpp"
#include "dissop/types.hpp"

namespace dissop {

struct RunConfig {
    std::optional<ZGrid> zgrid;
    std::vector<cxd> z_list;
    double tol = kOdeTol;
    CriteriaOptions criteria;
};

struct ProblemDocument {
    OperatorSpec spec;
    RunConfig run;
};

ProblemDocument load_problem(const std::string& path);
ProblemDocument parse_problem(const std::string& json_text);

struct Diagnostics {
    bool ok = true;
    std::vector<std::string> errors;
    std::vector<std::string> notes;
    double hermitian_defect = 0.0;
    double commutativity = 0.0;
    double trace_integral = 0.0;
};

// Schema check plus the OperatorSpec invariant report; never throws on
// malformed documents, collects messages instead.
Diagnostics validate_problem(const std::string& path);

// Fixed "%.17g" float formatting; byte-identical output for identical input.
std::string format_double(double v);
std::string csv_row(const std::vector<double>& values);

std::string criteria_report_json(const CriteriaReport& rep);

}  // namespace dissop
