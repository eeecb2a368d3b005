// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakval/emit.hpp"

#include <cstdio>
#include <fstream>

namespace weakval {

namespace {

struct Cell {
    enum class Kind { empty, number, integer, text };
    Kind kind = Kind::empty;
    std::string value;
};

Cell cell(const std::optional<double>& v) {
    if (!v) return {};
    return {Cell::Kind::number, format_double(*v)};
}
Cell cell(const std::optional<std::uint64_t>& v) {
    if (!v) return {};
    return {Cell::Kind::integer, std::to_string(*v)};
}
Cell cell(const std::optional<std::string>& v) {
    if (!v) return {};
    return {Cell::Kind::text, *v};
}
Cell cell(const std::string& v) { return {Cell::Kind::text, v}; }

/// Single source of the column order for both serializers.
template <typename Fn>
void for_each_cell(const ResultRow& r, Fn&& fn) {
    fn("experiment", cell(r.experiment));
    fn("seed", cell(r.seed));
    fn("n_shots", cell(r.n_shots));
    fn("epsilon1", cell(r.epsilon1));
    fn("epsilon2", cell(r.epsilon2));
    fn("z", cell(r.z));
    fn("delta_t", cell(r.delta_t));
    fn("coupling_mode", cell(r.coupling_mode));
    fn("success_fraction", cell(r.success_fraction));
    fn("success_fraction_exact", cell(r.success_fraction_exact));
    fn("success_fraction_theory", cell(r.success_fraction_theory));
    fn("estimate_z", cell(r.estimate_z));
    fn("stderr_z_paper", cell(r.stderr_z_paper));
    fn("stderr_z_exact", cell(r.stderr_z_exact));
    fn("estimate_z2", cell(r.estimate_z2));
    fn("stderr_z2_paper", cell(r.stderr_z2_paper));
    fn("stderr_z2_exact", cell(r.stderr_z2_exact));
    fn("estimate_x", cell(r.estimate_x));
    fn("stderr_x_paper", cell(r.stderr_x_paper));
    fn("stderr_x_exact", cell(r.stderr_x_exact));
    fn("theory_weak_z", cell(r.theory_weak_z));
    fn("theory_weak_z_im", cell(r.theory_weak_z_im));
    fn("theory_weak_x", cell(r.theory_weak_x));
    fn("theory_weak_x_im", cell(r.theory_weak_x_im));
    fn("exact_estimate_z", cell(r.exact_estimate_z));
    fn("exact_estimate_z2", cell(r.exact_estimate_z2));
    fn("exact_estimate_x", cell(r.exact_estimate_x));
    fn("deviation_z", cell(r.deviation_z));
    fn("max_first_order_discrepancy", cell(r.max_first_order_discrepancy));
    fn("zx_xz_max_diff", cell(r.zx_xz_max_diff));
    fn("probe_rate_sampled", cell(r.probe_rate_sampled));
    fn("probe_rate_exact", cell(r.probe_rate_exact));
    fn("probe_rate_theory", cell(r.probe_rate_theory));
    fn("probe_rate_no_postselect", cell(r.probe_rate_no_postselect));
    fn("probe_rate_stderr", cell(r.probe_rate_stderr));
    fn("excess_norm", cell(r.excess_norm));
    fn("runs_required", cell(r.runs_required));
    fn("validity_flag", cell(r.validity_flag));
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

void fill_common(ResultRow& row, const ExperimentReport& report) {
    const ExperimentSpec& spec = report.spec;
    row.experiment = to_string(spec.variant);
    row.epsilon1 = spec.epsilon1;
    row.epsilon2 = spec.epsilon2;
    row.z = spec.system.z;
    row.delta_t = spec.delta_t;
    if (report.postselection) {
        row.success_fraction = report.postselection->success_fraction;
    }
    row.success_fraction_exact = report.success_fraction_exact;
    row.success_fraction_theory = report.success_fraction_theory;
    if (report.theory_weak_z) {
        row.theory_weak_z = report.theory_weak_z->re;
        row.theory_weak_z_im = report.theory_weak_z->im;
    }
    if (report.theory_weak_x) {
        row.theory_weak_x = report.theory_weak_x->re;
        row.theory_weak_x_im = report.theory_weak_x->im;
    }
    row.validity_flag = report.validity_flag;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<ResultRow> rows_from_report(const ExperimentReport& report) {
    std::vector<ResultRow> rows;
    if (report.spec.variant == ExperimentVariant::convergence_sweep) {
        for (const ConvergenceRow& point : report.sweep) {
            ResultRow row;
            fill_common(row, report);
            row.epsilon1 = point.epsilon;
            row.exact_estimate_z = point.estimate;
            row.deviation_z = point.deviation;
            rows.push_back(std::move(row));
        }
        return rows;
    }

    ResultRow row;
    fill_common(row, report);
    row.seed = report.spec.plan.master_seed;
    row.n_shots = report.spec.plan.n_shots;
    if (report.estimate_z) {
        row.estimate_z = report.estimate_z->value;
        row.stderr_z_paper = report.estimate_z->stderr_paper;
        row.stderr_z_exact = report.estimate_z->stderr_exact;
    }
    if (report.estimate_z2) {
        row.estimate_z2 = report.estimate_z2->value;
        row.stderr_z2_paper = report.estimate_z2->stderr_paper;
        row.stderr_z2_exact = report.estimate_z2->stderr_exact;
    }
    if (report.estimate_x) {
        row.estimate_x = report.estimate_x->value;
        row.stderr_x_paper = report.estimate_x->stderr_paper;
        row.stderr_x_exact = report.estimate_x->stderr_exact;
    }
    row.exact_estimate_z = report.exact_estimate_z;
    row.exact_estimate_z2 = report.exact_estimate_z2;
    row.exact_estimate_x = report.exact_estimate_x;
    row.max_first_order_discrepancy = report.max_first_order_discrepancy;
    row.zx_xz_max_diff = report.zx_xz_max_diff;
    if (report.dynamical) {
        const DynamicalResult& dyn = *report.dynamical;
        if (report.spec.coupling_mode == CouplingMode::first_order) {
            row.coupling_mode = "first_order";
        } else {
            row.coupling_mode = "exact";
        }
        row.probe_rate_sampled = dyn.rate_sampled;
        row.probe_rate_exact = dyn.rate_exact;
        row.probe_rate_theory = dyn.rate_first_order;
        row.probe_rate_no_postselect = dyn.rate_no_postselect;
        row.probe_rate_stderr = dyn.rate_stderr;
        row.excess_norm = dyn.excess_norm;
        row.runs_required = dyn.runs_required;
    }
    rows.push_back(std::move(row));
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out;
    ResultRow header_probe;
    bool first = true;
    for_each_cell(header_probe, [&](const char* name, const Cell&) {
        if (!first) out += ',';
        first = false;
        out += name;
    });
    out += '\n';
    for (const ResultRow& row : rows) {
        first = true;
        for_each_cell(row, [&](const char*, const Cell& c) {
            if (!first) out += ',';
            first = false;
            if (c.kind != Cell::Kind::empty) out += csv_escape(c.value);
        });
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const std::vector<ResultRow>& rows) {
    std::string out;
    for (const ResultRow& row : rows) {
        std::string line = "{";
        bool first = true;
        for_each_cell(row, [&](const char* name, const Cell& c) {
            if (c.kind == Cell::Kind::empty) return;
            if (!first) line += ',';
            first = false;
            line += '"';
            line += name;
            line += "\":";
            if (c.kind == Cell::Kind::text) {
                line += '"' + json_escape(c.value) + '"';
            } else {
                line += c.value;
            }
        });
        out += line + "}\n";
    }
    return out;
}

std::string serialize(const std::vector<ResultRow>& rows, OutputFormat format) {
    return format == OutputFormat::csv ? to_csv(rows) : to_jsonl(rows);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw Error(errc::io_error, "cannot open '" + path + "' for writing");
    }
    stream << content;
    if (!stream) {
        throw Error(errc::io_error, "failed writing '" + path + "'");
    }
}

} // namespace weakval
