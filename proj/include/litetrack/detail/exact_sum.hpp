#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace litetrack::detail {

/// Error-free running sum of doubles (Shewchuk expansion). Supports exact
/// comparison of two sums regardless of accumulation order, which keeps
/// cost-tie decisions stable between the solver and the enumeration oracle.
class ExactSum {
public:
    void add(double x) {
        // grow-expansion: fold x through the existing components
        double q = x;
        std::size_t out = 0;
        for (std::size_t i = 0; i < comps_.size(); ++i) {
            const double a = q;
            const double b = comps_[i];
            const double s = a + b;
            const double bv = s - a;
            const double av = s - bv;
            const double err = (a - av) + (b - bv);
            if (err != 0.0) {
                comps_[out++] = err;
            }
            q = s;
        }
        comps_.resize(out);
        if (q != 0.0) {
            comps_.push_back(q);
        }
    }

    void add(const ExactSum& other) {
        for (double c : other.comps_) {
            add(c);
        }
    }

    void subtract(const ExactSum& other) {
        for (double c : other.comps_) {
            add(-c);
        }
    }

    double approx() const {
        double s = 0.0;
        for (double c : comps_) {
            s += c;
        }
        return s;
    }

    int sign() const {
        // components are nonoverlapping with increasing magnitude
        if (comps_.empty()) {
            return 0;
        }
        const double top = comps_.back();
        return top > 0.0 ? 1 : (top < 0.0 ? -1 : 0);
    }

    /// -1, 0, +1 as this sum is <, ==, > other, exactly.
    int compare(const ExactSum& other) const {
        ExactSum diff = *this;
        diff.subtract(other);
        return diff.sign();
    }

private:
    std::vector<double> comps_;
};

} // namespace litetrack::detail
