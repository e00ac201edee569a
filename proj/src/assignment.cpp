#include <litetrack/assignment.hpp>

#include <litetrack/detail/exact_sum.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace litetrack::assignment {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shortest-augmenting-path Hungarian on a square matrix. Returns the column
/// assigned to each row. Deterministic: scans use strict comparisons and
/// ascending indices.
std::vector<int> hungarian_square(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    std::vector<double> u(n + 1, 0.0);
    std::vector<double> v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0); // row matched to column j (1-based, 0 = free)
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (p[j] >= 1) {
            col_of_row[p[j] - 1] = j - 1;
        }
    }
    return col_of_row;
}

/// Complete assignment of the smaller dimension via zero-cost padding.
/// Returns col per row, -1 for rows left out (possible only when R > C).
std::vector<int> complete_assignment(const Eigen::MatrixXd& sub) {
    const int rows = static_cast<int>(sub.rows());
    const int cols = static_cast<int>(sub.cols());
    const int n = std::max(rows, cols);
    if (n == 0) {
        return {};
    }
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(n, n);
    padded.topLeftCorner(rows, cols) = sub;
    const std::vector<int> col_of_row = hungarian_square(padded);
    std::vector<int> out(rows, -1);
    for (int r = 0; r < rows; ++r) {
        if (col_of_row[r] < cols) {
            out[r] = col_of_row[r];
        }
    }
    return out;
}

/// Total cost of a complete assignment, split into the forbidden-pair count
/// and the exact sum over allowed pairs. Substituted totals order identically
/// to (forbidden, allowed) because the substitution constant dominates.
struct CostKey {
    int forbidden = 0;
    detail::ExactSum allowed;

    int compare(const CostKey& o) const {
        if (forbidden != o.forbidden) {
            return forbidden < o.forbidden ? -1 : 1;
        }
        return allowed.compare(o.allowed);
    }
    bool equals(const CostKey& o) const { return compare(o) == 0; }
};

struct CapProblem {
    const Eigen::MatrixXd& cost;
    double cap;
    double forbidden_value;

    bool is_forbidden(int r, int c) const { return cost(r, c) > cap; }
    double substituted(int r, int c) const {
        return is_forbidden(r, c) ? forbidden_value : cost(r, c);
    }
    void add_contribution(CostKey& key, int r, int c) const {
        if (is_forbidden(r, c)) {
            key.forbidden += 1;
        } else {
            key.allowed.add(cost(r, c));
        }
    }
    void remove_contribution(CostKey& key, int r, int c) const {
        if (is_forbidden(r, c)) {
            key.forbidden -= 1;
        } else {
            key.allowed.add(-cost(r, c));
        }
    }
};

struct SubSolution {
    std::vector<int> col_of_row; // indexed like the row subset, values are col-subset indices or -1
    CostKey key;
};

SubSolution solve_subproblem(const CapProblem& prob, const std::vector<int>& rows,
                             const std::vector<int>& cols) {
    SubSolution sol;
    const int nr = static_cast<int>(rows.size());
    const int nc = static_cast<int>(cols.size());
    if (nr == 0 || nc == 0) {
        sol.col_of_row.assign(nr, -1);
        return sol;
    }
    Eigen::MatrixXd sub(nr, nc);
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nc; ++j) {
            sub(i, j) = prob.substituted(rows[i], cols[j]);
        }
    }
    sol.col_of_row = complete_assignment(sub);
    for (int i = 0; i < nr; ++i) {
        if (sol.col_of_row[i] >= 0) {
            prob.add_contribution(sol.key, rows[i], cols[sol.col_of_row[i]]);
        }
    }
    return sol;
}

bool contributions_swap_equal(const CapProblem& prob, int r, int c_old, int r2, int c_new) {
    // old pairing: (r, c_old) [+ (r2, c_new) when r2 >= 0]
    // new pairing: (r, c_new) [+ (r2, c_old)]
    CostKey oldk;
    CostKey newk;
    prob.add_contribution(oldk, r, c_old);
    prob.add_contribution(newk, r, c_new);
    if (r2 >= 0) {
        prob.add_contribution(oldk, r2, c_new);
        prob.add_contribution(newk, r2, c_old);
    }
    return oldk.equals(newk);
}

AssignmentResult strip_and_pack(const CapProblem& prob,
                                const std::vector<std::pair<int, int>>& full, int rows,
                                int cols) {
    AssignmentResult out;
    std::vector<char> row_used(rows, 0);
    std::vector<char> col_used(cols, 0);
    for (const auto& [r, c] : full) {
        if (!prob.is_forbidden(r, c)) {
            out.matches.emplace_back(r, c);
            out.total_cost += prob.cost(r, c);
            row_used[r] = 1;
            col_used[c] = 1;
        }
    }
    for (int r = 0; r < rows; ++r) {
        if (!row_used[r]) {
            out.unmatched_rows.push_back(r);
        }
    }
    for (int c = 0; c < cols; ++c) {
        if (!col_used[c]) {
            out.unmatched_cols.push_back(c);
        }
    }
    return out;
}

void validate_finite(const Eigen::MatrixXd& cost) {
    if (!cost.allFinite()) {
        throw std::invalid_argument("assignment: cost matrix must be finite");
    }
}

double forbidden_substitute(const Eigen::MatrixXd& cost, double cap) {
    double allowed_mass = 0.0;
    for (Eigen::Index r = 0; r < cost.rows(); ++r) {
        for (Eigen::Index c = 0; c < cost.cols(); ++c) {
            if (cost(r, c) <= cap) {
                allowed_mass += std::abs(cost(r, c));
            }
        }
    }
    return 2.0 * allowed_mass + std::abs(cap) + 1.0;
}

} // namespace

bool AssignmentResult::row_matched(int r) const {
    return std::any_of(matches.begin(), matches.end(),
                       [r](const auto& m) { return m.first == r; });
}

bool AssignmentResult::col_matched(int c) const {
    return std::any_of(matches.begin(), matches.end(),
                       [c](const auto& m) { return m.second == c; });
}

std::vector<int> solve_dense(const Eigen::MatrixXd& cost) {
    validate_finite(cost);
    return complete_assignment(cost);
}

AssignmentResult solve(const Eigen::MatrixXd& cost, double cap) {
    validate_finite(cost);
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    CapProblem prob{cost, cap, forbidden_substitute(cost, cap)};
    if (rows == 0 || cols == 0) {
        return strip_and_pack(prob, {}, rows, cols);
    }

    std::vector<int> rem_rows(rows);
    std::vector<int> rem_cols(cols);
    for (int r = 0; r < rows; ++r) {
        rem_rows[r] = r;
    }
    for (int c = 0; c < cols; ++c) {
        rem_cols[c] = c;
    }

    SubSolution initial = solve_subproblem(prob, rem_rows, rem_cols);
    // incumbent: globally indexed column choice per row (-1 = row left out)
    std::vector<int> incumbent(rows, -1);
    for (int i = 0; i < rows; ++i) {
        if (initial.col_of_row[i] >= 0) {
            incumbent[i] = rem_cols[initial.col_of_row[i]];
        }
    }
    CostKey rem_key = initial.key;

    const bool skips_possible = rows > cols;
    std::vector<std::pair<int, int>> full;
    full.reserve(std::min(rows, cols));

    // Fix rows in ascending order to the smallest column (then skip) that
    // still admits a completion with the optimal cost, yielding the
    // lexicographically smallest optimal assignment.
    for (int r = 0; r < rows; ++r) {
        rem_rows.erase(std::find(rem_rows.begin(), rem_rows.end(), r));
        const int inc_choice = incumbent[r];

        // per-row lower bound over the rest, used for cheap candidate rejection
        double lb_rest = 0.0;
        for (int r2 : rem_rows) {
            double row_min = kInf;
            for (int c : rem_cols) {
                row_min = std::min(row_min, prob.substituted(r2, c));
            }
            if (skips_possible) {
                row_min = std::min(row_min, 0.0);
            }
            lb_rest += row_min;
        }
        const double rem_approx = rem_key.allowed.approx() +
                                  rem_key.forbidden * prob.forbidden_value;
        const double prune_margin = 1e-6 * std::max(1.0, std::abs(rem_approx));

        int chosen = -2;
        for (std::size_t ci = 0; ci < rem_cols.size(); ++ci) {
            const int cand = rem_cols[ci];
            if (cand == inc_choice) {
                chosen = cand;
                break;
            }
            if (inc_choice >= 0) {
                // O(1) exchange checks against the incumbent
                int r2 = -1;
                for (int rr : rem_rows) {
                    if (incumbent[rr] == cand) {
                        r2 = rr;
                        break;
                    }
                }
                if (contributions_swap_equal(prob, r, inc_choice, r2, cand)) {
                    if (r2 >= 0) {
                        incumbent[r2] = inc_choice;
                    }
                    incumbent[r] = cand;
                    chosen = cand;
                    break;
                }
            }
            if (prob.substituted(r, cand) + lb_rest > rem_approx + prune_margin) {
                continue;
            }
            // exact feasibility: force (r, cand), re-solve the rest
            std::vector<int> cols_rest;
            cols_rest.reserve(rem_cols.size() - 1);
            for (int c : rem_cols) {
                if (c != cand) {
                    cols_rest.push_back(c);
                }
            }
            SubSolution rest = solve_subproblem(prob, rem_rows, cols_rest);
            CostKey cand_key = rest.key;
            prob.add_contribution(cand_key, r, cand);
            if (cand_key.equals(rem_key)) {
                incumbent[r] = cand;
                for (std::size_t i = 0; i < rem_rows.size(); ++i) {
                    incumbent[rem_rows[i]] =
                        rest.col_of_row[i] >= 0 ? cols_rest[rest.col_of_row[i]] : -1;
                }
                chosen = cand;
                break;
            }
        }
        if (chosen == -2) {
            // the incumbent leaves this row out; no column admits the optimum
            chosen = -1;
        }
        if (chosen >= 0) {
            full.emplace_back(r, chosen);
            rem_cols.erase(std::find(rem_cols.begin(), rem_cols.end(), chosen));
            prob.remove_contribution(rem_key, r, chosen);
        }
    }

    return strip_and_pack(prob, full, rows, cols);
}

AssignmentResult brute_force(const Eigen::MatrixXd& cost, double cap) {
    validate_finite(cost);
    const int rows = static_cast<int>(cost.rows());
    const int cols = static_cast<int>(cost.cols());
    CapProblem prob{cost, cap, forbidden_substitute(cost, cap)};
    if (rows == 0 || cols == 0) {
        return strip_and_pack(prob, {}, rows, cols);
    }
    const int small = std::min(rows, cols);
    const int large = std::max(rows, cols);
    if (small > 8) {
        throw std::invalid_argument("brute_force: min dimension must be <= 8");
    }
    double count = 1.0;
    for (int i = 0; i < small; ++i) {
        count *= static_cast<double>(large - i);
    }
    if (count > 2e7) {
        throw std::invalid_argument("brute_force: instance too large to enumerate");
    }

    std::vector<char> col_used(cols, 0);
    std::vector<std::pair<int, int>> current;
    std::vector<std::pair<int, int>> best_full;
    CostKey best_key;
    bool have_best = false;
    CostKey cur_key;
    int skips_left = rows > cols ? rows - cols : 0;

    // Depth-first over rows with columns in ascending order (skip tried last),
    // so complete assignments are enumerated in lexicographic sequence order;
    // keeping the first strictly-better key realizes the tie-break for free.
    auto recurse = [&](auto&& self, int r) -> void {
        if (r == rows) {
            if (!have_best || cur_key.compare(best_key) < 0) {
                best_key = cur_key;
                best_full = current;
                have_best = true;
            }
            return;
        }
        for (int c = 0; c < cols; ++c) {
            if (col_used[c]) {
                continue;
            }
            col_used[c] = 1;
            current.emplace_back(r, c);
            prob.add_contribution(cur_key, r, c);
            self(self, r + 1);
            prob.remove_contribution(cur_key, r, c);
            current.pop_back();
            col_used[c] = 0;
        }
        if (skips_left > 0) {
            --skips_left;
            self(self, r + 1);
            ++skips_left;
        }
    };
    recurse(recurse, 0);

    return strip_and_pack(prob, best_full, rows, cols);
}

} // namespace litetrack::assignment
