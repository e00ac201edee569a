#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace litetrack::assignment {

struct AssignmentResult {
    std::vector<std::pair<int, int>> matches; // (row, col), ascending by row
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
    double total_cost = 0.0; // sum over matches in row order

    bool row_matched(int r) const;
    bool col_matched(int c) const;
};

/// Minimum-cost rectangular assignment with a cost cap.
///
/// Entries above `cap` cannot be matched; internally they are substituted by
/// a dominating constant so the solver stays total, and any such pair is
/// stripped from the result. Among equal-cost solutions the complete
/// pre-strip assignment is chosen lexicographically by (row, col), so results
/// are stable across runs and platforms. Empty matrices yield empty results.
AssignmentResult solve(const Eigen::MatrixXd& cost, double cap);

/// Exhaustive-enumeration reference with the identical cap and tie-break
/// semantics. Refuses instances whose enumeration would be intractable
/// (min(R,C) > 8 or too many injective mappings).
AssignmentResult brute_force(const Eigen::MatrixXd& cost, double cap);

/// Plain dense square/rectangular min-cost assignment (no cap, complete
/// matching of the smaller dimension). Returns col index per row, -1 when the
/// row is left out (only possible for R > C). Deterministic.
std::vector<int> solve_dense(const Eigen::MatrixXd& cost);

} // namespace litetrack::assignment
