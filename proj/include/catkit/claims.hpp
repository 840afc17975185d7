#pragma once

#include "catkit/fock.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace catkit {

/// One sample of a claim's parameter domain; unused fields stay empty.
struct ClaimPoint {
    std::optional<double> alpha_re;
    std::optional<double> alpha_im;
    std::optional<double> phi;
    std::optional<double> gamma;
    std::optional<int> n;
};

enum class Verdict { consistent, discrepant };

/// A closed-form statement paired with an independent numeric route. The
/// analytic side evaluates the stated formula; the oracle side recomputes the
/// same quantity from dense matrices or direct series, never from the formula
/// under test.
struct Claim {
    std::string id;
    std::string description;
    std::string formula;  // serialized under the report's `paper_ref` key
    std::vector<ClaimPoint> domain;
    std::function<Complex(const FockSpace&, const ClaimPoint&)> analytic;
    std::function<Complex(const FockSpace&, const ClaimPoint&)> oracle;
    int min_dim = 64;
    bool must_hold = false;          // verdict-stability enforcement for the CLI
    Verdict expected = Verdict::consistent;
};

struct ClaimVerdict {
    std::string id;
    std::string description;
    std::string formula;
    double max_abs_dev = 0.0;
    double max_rel_dev = 0.0;
    Verdict verdict = Verdict::consistent;
    ClaimPoint worst_point;
    bool skipped = false;
};

/// consistent iff max_abs_dev <= 1e-8 or max_rel_dev <= 1e-6.
Verdict classify(double max_abs_dev, double max_rel_dev);

std::vector<Claim> builtin_claims();

/// Deterministic verdicts in registry order. Claims whose min_dim exceeds the
/// space are emitted as skip records, never silently dropped. Oracle plumbing
/// is preflighted on forced vacuum/identity fixtures first; a preflight
/// failure throws std::logic_error.
std::vector<ClaimVerdict> run_claims(const FockSpace& space, const std::vector<Claim>& claims);

/// True when every must-hold claim ran and reproduced its expected verdict.
bool must_hold_satisfied(const std::vector<Claim>& claims,
                         const std::vector<ClaimVerdict>& verdicts);

nlohmann::ordered_json claims_report_json(const FockSpace& space,
                                          const std::vector<ClaimVerdict>& verdicts);

}  // namespace catkit
