#ifndef MICROSHELL_CLI_VERIFY_HPP
#define MICROSHELL_CLI_VERIFY_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace microshell::cli {

/// Reference tolerances for the two published three-level cases
/// (levels 0, 5, 8 at E = 2 and E = 3).
struct VerifyOptions {
    double mean_tol = 0.001;
    double beta_tol = 0.002;
    double probability_tol = 0.003;
    double residual_tol = 1e-10;
    double max_rel_diff_bound = 0.10;
};

struct VerifyRow {
    std::string case_label;
    std::string quantity;
    double reference = 0.0;
    double computed = 0.0;
    double delta = 0.0;
    double tolerance = 0.0;
    /// "within": |delta| <= tolerance. "below": computed < tolerance.
    std::string rule;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass = true;
};

VerifyReport verify_paper(const VerifyOptions& options = {});

std::string render_verify_table(const VerifyReport& report);
nlohmann::json verify_to_json(const VerifyReport& report);

}  // namespace microshell::cli

#endif
