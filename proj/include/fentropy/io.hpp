#pragma once

#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bounds.hpp"
#include "convex.hpp"
#include "errors.hpp"
#include "format.hpp"
#include "linalg.hpp"
#include "majorization.hpp"
#include "states.hpp"
#include "verify.hpp"

// Serialization. Reading goes through nlohmann::json; writing is
// hand-rolled so every number is emitted as %.17g and reports are
// byte-identical for identical inputs.
namespace fentropy::io {

using linalg::HermitianMatrix;

// ---------- writing ----------

inline void write_real_array(std::ostream& os, const std::vector<double>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_real(v[i]);
    }
    os << ']';
}

inline void write_matrix_json(std::ostream& os, const HermitianMatrix& m) {
    const int d = m.dim();
    os << "{\"dim\":" << d << ",\"re\":[";
    for (int i = 0; i < d; ++i) {
        if (i) os << ',';
        os << '[';
        for (int j = 0; j < d; ++j) {
            if (j) os << ',';
            os << format_real(m(i, j).real());
        }
        os << ']';
    }
    os << "],\"im\":[";
    for (int i = 0; i < d; ++i) {
        if (i) os << ',';
        os << '[';
        for (int j = 0; j < d; ++j) {
            if (j) os << ',';
            os << format_real(m(i, j).imag());
        }
        os << ']';
    }
    os << "]}";
}

inline void write_state_pair_json(std::ostream& os, double eps,
                                  const states::DensityMatrix& rho,
                                  const states::DensityMatrix& sigma) {
    os << "{\"d\":" << rho.dim() << ",\"eps\":" << format_real(eps)
       << ",\"rho\":";
    write_matrix_json(os, rho.matrix());
    os << ",\"sigma\":";
    write_matrix_json(os, sigma.matrix());
    os << "}\n";
}

inline void write_simplex_pair_json(std::ostream& os,
                                    const majorization::SimplexPair& pair) {
    os << "{\"p\":";
    write_real_array(os, pair.p.entries());
    os << ",\"q\":";
    write_real_array(os, pair.q.entries());
    os << ",\"eps\":" << format_real(pair.eps) << "}";
}

// Field order matches the record; `elapsed` is wall time and is
// excluded so identical (f, d, n, seed) give identical bytes.
inline void write_report_json(std::ostream& os,
                              const verify::VerificationReport& rep) {
    os << "{\"f_name\":\"" << rep.f_name << "\",\"d\":" << rep.d
       << ",\"samples\":" << rep.samples << ",\"seed\":" << rep.seed
       << ",\"max_entropy_gap\":" << format_real(rep.max_entropy_gap)
       << ",\"bound_at_gap\":" << format_real(rep.bound_at_gap)
       << ",\"min_slack\":" << format_real(rep.min_slack) << ",\"violations\":[";
    for (std::size_t i = 0; i < rep.violations.size(); ++i) {
        if (i) os << ',';
        os << '[' << rep.violations[i].first << ','
           << format_real(rep.violations[i].second) << ']';
    }
    os << "]}\n";
}

inline void write_oracle_json(std::ostream& os,
                              const verify::OracleResult& res) {
    os << "{\"eps\":" << format_real(res.eps) << ",\"d\":" << res.d
       << ",\"f_name\":\"" << res.f_name
       << "\",\"max_Df\":" << format_real(res.max_Df) << ",\"argmax\":";
    write_simplex_pair_json(os, res.argmax);
    os << ",\"bound\":" << format_real(res.bound)
       << ",\"gap\":" << format_real(res.gap)
       << ",\"grid_points\":" << res.grid_points
       << ",\"polish_iterations\":" << res.polish_iterations << "}\n";
}

inline void write_bound_json(std::ostream& os, const bounds::BoundResult& r) {
    os << "{\"f_name\":\"" << r.query.f.name() << "\",\"d\":" << r.query.d
       << ",\"eps\":" << format_real(r.query.eps)
       << ",\"t\":" << format_real(r.query.t)
       << ",\"value\":" << format_real(r.value) << ",\"regime\":\""
       << bounds::regime_name(r.regime) << "\"}\n";
}

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<verify::SweepRow>& rows) {
    const bool slack = !rows.empty() && rows.front().min_slack.has_value();
    const bool gap = !rows.empty() && rows.front().oracle_gap.has_value();
    os << "eps,delta,regime";
    if (slack) os << ",min_slack";
    if (gap) os << ",oracle_gap";
    os << '\n';
    for (const auto& row : rows) {
        os << format_real(row.eps) << ',' << format_real(row.delta) << ','
           << bounds::regime_name(row.regime);
        if (slack) os << ',' << format_real(*row.min_slack);
        if (gap) os << ',' << format_real(*row.oracle_gap);
        os << '\n';
    }
}

inline void write_sweep_json(std::ostream& os, const std::string& f_name,
                             int d, double t,
                             const std::vector<verify::SweepRow>& rows) {
    os << "{\"f_name\":\"" << f_name << "\",\"d\":" << d
       << ",\"t\":" << format_real(t) << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) os << ',';
        const auto& row = rows[i];
        os << "{\"eps\":" << format_real(row.eps)
           << ",\"delta\":" << format_real(row.delta) << ",\"regime\":\""
           << bounds::regime_name(row.regime) << '"';
        if (row.min_slack) os << ",\"min_slack\":" << format_real(*row.min_slack);
        if (row.oracle_gap)
            os << ",\"oracle_gap\":" << format_real(*row.oracle_gap);
        os << '}';
    }
    os << "]}\n";
}

// ---------- reading ----------

inline nlohmann::json parse_json(std::istream& is, const std::string& origin) {
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(origin + ": invalid JSON (" +
                              std::string(e.what()) + ")");
    }
}

inline HermitianMatrix matrix_from_json(const nlohmann::json& j,
                                        const std::string& origin) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re"))
        throw ValidationError(origin + ": expected a matrix object "
                              "{\"dim\": d, \"re\": [[...]], \"im\": [[...]]}");
    if (!j["dim"].is_number_integer() || j["dim"].get<long>() < 1)
        throw ValidationError(origin + ": \"dim\" must be a positive integer");
    const int d = j["dim"].get<int>();
    auto read_plane = [&](const char* key, bool required)
        -> std::vector<std::vector<double>> {
        if (!j.contains(key)) {
            if (required)
                throw ValidationError(origin + ": missing \"" +
                                      std::string(key) + "\"");
            return std::vector<std::vector<double>>(
                d, std::vector<double>(d, 0.0));
        }
        const auto& plane = j[key];
        if (!plane.is_array() || plane.size() != static_cast<std::size_t>(d))
            throw ValidationError(origin + ": \"" + std::string(key) +
                                  "\" must be a " + std::to_string(d) + "x" +
                                  std::to_string(d) + " array");
        std::vector<std::vector<double>> out;
        out.reserve(d);
        for (const auto& row : plane) {
            if (!row.is_array() || row.size() != static_cast<std::size_t>(d))
                throw ValidationError(origin + ": \"" + std::string(key) +
                                      "\" must be a " + std::to_string(d) +
                                      "x" + std::to_string(d) + " array");
            std::vector<double> r;
            r.reserve(d);
            for (const auto& x : row) {
                if (!x.is_number())
                    throw ValidationError(origin + ": matrix entries must "
                                          "be numbers");
                r.push_back(x.get<double>());
            }
            out.push_back(std::move(r));
        }
        return out;
    };
    const auto re = read_plane("re", true);
    const auto im = read_plane("im", false);
    std::vector<Complex> entries(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            entries[static_cast<std::size_t>(i) * d + k] =
                Complex(re[i][k], im[i][k]);
    try {
        return HermitianMatrix(d, std::move(entries));
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + std::string(e.what()));
    }
}

inline states::DensityMatrix density_from_json(const nlohmann::json& j,
                                               const std::string& origin) {
    try {
        return states::validate_density(matrix_from_json(j, origin));
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + std::string(e.what()));
    }
}

inline majorization::ProbabilityVector
probabilities_from_json(const nlohmann::json& j, const std::string& origin) {
    if (!j.is_array() || j.empty())
        throw ValidationError(origin + ": expected a nonempty JSON array "
                              "of probabilities");
    std::vector<double> p;
    p.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number())
            throw ValidationError(origin + ": probabilities must be numbers");
        p.push_back(x.get<double>());
    }
    try {
        return majorization::ProbabilityVector(std::move(p));
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + std::string(e.what()));
    }
}

// A state is either a probability array (diagonal embedding) or a
// matrix object.
inline states::DensityMatrix state_from_json(const nlohmann::json& j,
                                             const std::string& origin) {
    if (j.is_array()) {
        try {
            return states::from_probabilities(
                probabilities_from_json(j, origin));
        } catch (const ValidationError&) {
            throw;
        } catch (const Error& e) {
            throw ValidationError(origin + ": " + std::string(e.what()));
        }
    }
    return density_from_json(j, origin);
}

// Accepts either the pair object emitted by write_state_pair_json or a
// two-element array of states.
inline std::pair<states::DensityMatrix, states::DensityMatrix>
state_pair_from_json(const nlohmann::json& j, const std::string& origin) {
    if (j.is_object() && j.contains("rho") && j.contains("sigma"))
        return {state_from_json(j["rho"], origin + ": rho"),
                state_from_json(j["sigma"], origin + ": sigma")};
    if (j.is_array() && j.size() == 2)
        return {state_from_json(j[0], origin + ": [0]"),
                state_from_json(j[1], origin + ": [1]")};
    throw ValidationError(origin +
                          ": expected {\"rho\": ..., \"sigma\": ...} or a "
                          "two-element array of states");
}

// Tabulated convex function: CSV with header `x,fx`, x starting at 0
// and strictly increasing; the last x becomes t_max.
inline entropy::ConvexFunction read_f_table_csv(
    std::istream& is, const std::string& origin, const std::string& name,
    entropy::ConvexityCheck check = entropy::ConvexityCheck::warn) {
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    std::string line;
    if (!std::getline(is, line) || trim(line) != "x,fx")
        throw ValidationError(origin + ": first line must be the header x,fx");
    std::vector<double> xs, ys;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos)
            throw ValidationError(origin + ": line " + std::to_string(lineno) +
                                  " is not `x,fx`");
        auto parse = [&](std::string field) {
            field = trim(field);
            char* end = nullptr;
            const double v = std::strtod(field.c_str(), &end);
            if (field.empty() || end != field.c_str() + field.size())
                throw ValidationError(origin + ": line " +
                                      std::to_string(lineno) +
                                      " has a malformed number '" + field + "'");
            return v;
        };
        xs.push_back(parse(row.substr(0, comma)));
        ys.push_back(parse(row.substr(comma + 1)));
    }
    try {
        return entropy::ConvexFunction::tabulated(name, std::move(xs),
                                                  std::move(ys), check);
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + std::string(e.what()));
    }
}

}  // namespace fentropy::io
