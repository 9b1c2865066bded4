#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lpsemi/core.hpp"

namespace lpsemi {

/// Structured outcome of one identity check.
struct VerificationReport {
    std::string identity_id;
    std::map<std::string, std::string> params;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool expected_fail = false; // documented paper discrepancies
    std::string note;
    double runtime_ms = 0.0;
};

inline VerificationReport make_report(std::string id, std::map<std::string, std::string> params,
                                      double residual, double tolerance, std::string note = {})
{
    VerificationReport r;
    r.identity_id = std::move(id);
    r.params = std::move(params);
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.note = std::move(note);
    return r;
}

/// Grid and tolerance configuration shared by the verification suites.
struct SuiteConfig {
    std::size_t trunc_len = 64;
    std::vector<double> p_values{1.0, 2.0, 4.0, inf};
    std::vector<double> t_values{0.1, 0.5, 1.0, 2.0};
    double tolerance = 1e-8;
    int quadrature_order = 96;
    std::uint64_t seed = 20240915;

    void validate() const
    {
        if (!(tolerance > 0.0)) throw ConfigError("SuiteConfig: tolerance must be positive");
        if (trunc_len < 8) throw ConfigError("SuiteConfig: trunc_len must be at least 8");
        for (double p : p_values)
            if (!(p >= 1.0)) throw ConfigError("SuiteConfig: p values must satisfy p >= 1");
        for (double t : t_values)
            if (!(t >= 0.0)) throw ConfigError("SuiteConfig: t values must be non-negative");
        if (quadrature_order < 8) throw ConfigError("SuiteConfig: quadrature_order must be at least 8");
    }
};

} // namespace lpsemi
