#include "tma/milp_export.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tma/network.hpp"

namespace tma {

namespace {

std::string fmt(double v) {
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void append_terms(std::ostringstream& os, const MilpInstance& inst,
                  const std::vector<std::pair<std::size_t, double>>& terms) {
    bool first = true;
    for (const auto& [vi, c] : terms) {
        if (c == 0.0) continue;
        if (first) {
            if (c < 0) os << "- ";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        double a = std::abs(c);
        if (a != 1.0) os << fmt(a) << " ";
        os << inst.vars[vi].name;
    }
    if (first) os << "0 " << (inst.vars.empty() ? "x0" : inst.vars[0].name);
}

std::string export_lp(const MilpInstance& inst) {
    std::ostringstream os;
    os << "\\ " << (inst.name.empty() ? "milp" : inst.name) << "\n";
    os << "Minimize\n obj: ";
    if (inst.objective.empty()) {
        os << "0" << (inst.vars.empty() ? "" : " " + inst.vars[0].name);
    } else {
        append_terms(os, inst, inst.objective);
    }
    os << "\nSubject To\n";
    for (const auto& row : inst.rows) {
        os << " " << row.name << ": ";
        append_terms(os, inst, row.terms);
        os << (row.sense == 'G' ? " >= " : row.sense == 'L' ? " <= " : " = ") << fmt(row.rhs)
           << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : inst.vars) {
        if (v.is_binary) continue;
        if (v.lb == v.ub) {
            os << " " << v.name << " = " << fmt(v.lb) << "\n";
        } else {
            os << " " << fmt(v.lb) << " <= " << v.name << " <= " << fmt(v.ub) << "\n";
        }
    }
    bool any_bin = false;
    for (const auto& v : inst.vars) any_bin = any_bin || v.is_binary;
    if (any_bin) {
        os << "Binaries\n";
        std::size_t col = 0;
        for (const auto& v : inst.vars) {
            if (!v.is_binary) continue;
            if (col == 0) os << " ";
            os << v.name;
            if (++col == 6) {
                os << "\n";
                col = 0;
            } else {
                os << " ";
            }
        }
        if (col) os << "\n";
    }
    os << "End\n";
    return os.str();
}

std::string export_mps(const MilpInstance& inst) {
    std::ostringstream os;
    os << "NAME " << (inst.name.empty() ? "milp" : inst.name) << "\n";
    os << "ROWS\n N COST\n";
    for (const auto& row : inst.rows) {
        os << " " << row.sense << " " << row.name << "\n";
    }

    // Column-major coefficient lists.
    std::vector<std::vector<std::pair<std::string, double>>> cols(inst.vars.size());
    for (const auto& [vi, c] : inst.objective) cols[vi].push_back({"COST", c});
    for (const auto& row : inst.rows) {
        for (const auto& [vi, c] : row.terms) cols[vi].push_back({row.name, c});
    }

    os << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (std::size_t vi = 0; vi < inst.vars.size(); ++vi) {
        const MilpVar& v = inst.vars[vi];
        if (v.is_binary != in_int) {
            os << " MARKER M" << marker++ << " 'MARKER' " << (v.is_binary ? "'INTORG'" : "'INTEND'")
               << "\n";
            in_int = v.is_binary;
        }
        if (cols[vi].empty()) {
            os << " " << v.name << " COST 0\n";
            continue;
        }
        for (const auto& [rn, c] : cols[vi]) {
            os << " " << v.name << " " << rn << " " << fmt(c) << "\n";
        }
    }
    if (in_int) os << " MARKER M" << marker++ << " 'MARKER' 'INTEND'\n";

    os << "RHS\n";
    for (const auto& row : inst.rows) {
        if (row.rhs != 0.0) os << " RHS " << row.name << " " << fmt(row.rhs) << "\n";
    }
    os << "BOUNDS\n";
    for (const auto& v : inst.vars) {
        if (v.is_binary) {
            if (v.ub == 0.0) {
                os << " FX BND " << v.name << " 0\n";
            } else {
                os << " BV BND " << v.name << "\n";
            }
            continue;
        }
        if (v.lb == v.ub) {
            os << " FX BND " << v.name << " " << fmt(v.lb) << "\n";
        } else {
            if (v.lb != 0.0) os << " LO BND " << v.name << " " << fmt(v.lb) << "\n";
            os << " UP BND " << v.name << " " << fmt(v.ub) << "\n";
        }
    }
    os << "ENDATA\n";
    return os.str();
}

} // namespace

ExportFormat export_format_from_string(const std::string& tag) {
    if (tag == "lp") return ExportFormat::LpText;
    if (tag == "mps") return ExportFormat::MpsText;
    throw ValidationError("unsupported export format '" + tag + "' (expected lp or mps)");
}

std::string export_milp(const MilpInstance& inst, ExportFormat format) {
    switch (format) {
    case ExportFormat::LpText: return export_lp(inst);
    case ExportFormat::MpsText: return export_mps(inst);
    }
    throw ValidationError("unsupported export format");
}

} // namespace tma
