#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rainbow_net/rational.hpp"

namespace rnf {

/// Half-open interval [lo, hi) with rational endpoints.
struct Interval {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint half-open intervals, kept in canonical form:
/// sorted, nonempty pieces, touching or overlapping pieces merged. Two sets
/// are equal iff they denote the same subset of the line.
class IntervalSet {
public:
    IntervalSet() = default;
    /// Accepts pieces in any order; empty pieces are dropped. Throws
    /// std::invalid_argument for reversed pieces (lo > hi).
    explicit IntervalSet(std::vector<Interval> pieces);
    IntervalSet(std::initializer_list<std::pair<Rational, Rational>> pieces);

    const std::vector<Interval>& intervals() const noexcept { return pieces_; }
    bool empty() const noexcept { return pieces_.empty(); }
    Rational measure() const;
    bool contains(const Rational& x) const;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet& operator|=(const IntervalSet& other) { return *this = unite(other); }

    std::string to_string() const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> pieces_;
};

}  // namespace rnf
