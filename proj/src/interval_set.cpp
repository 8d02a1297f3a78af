#include "rainbow_net/interval_set.hpp"

#include <algorithm>
#include <stdexcept>

namespace rnf {

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
    for (const Interval& piece : pieces) {
        if (piece.hi < piece.lo)
            throw std::invalid_argument("interval [" + piece.lo.to_string() + ", " + piece.hi.to_string() + ") is reversed");
    }
    std::erase_if(pieces, [](const Interval& iv) { return iv.lo == iv.hi; });
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const Interval& piece : pieces) {
        if (!pieces_.empty() && piece.lo <= pieces_.back().hi)
            pieces_.back().hi = max(pieces_.back().hi, piece.hi);
        else
            pieces_.push_back(piece);
    }
}

IntervalSet::IntervalSet(std::initializer_list<std::pair<Rational, Rational>> pieces)
    : IntervalSet([&] {
          std::vector<Interval> v;
          for (const auto& [lo, hi] : pieces) v.push_back({lo, hi});
          return v;
      }()) {}

Rational IntervalSet::measure() const {
    Rational total;
    for (const Interval& piece : pieces_) total += piece.length();
    return total;
}

bool IntervalSet::contains(const Rational& x) const {
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const Interval& iv) { return iv.lo <= x && x < iv.hi; });
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = pieces_;
    all.insert(all.end(), other.pieces_.begin(), other.pieces_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pieces_.size() && j < other.pieces_.size()) {
        const Interval& a = pieces_[i];
        const Interval& b = other.pieces_[j];
        const Rational lo = max(a.lo, b.lo);
        const Rational hi = min(a.hi, b.hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a.hi < b.hi)
            ++i;
        else
            ++j;
    }
    return IntervalSet(std::move(out));
}

std::string IntervalSet::to_string() const {
    if (pieces_.empty()) return "{}";
    std::string text;
    for (const Interval& piece : pieces_) {
        if (!text.empty()) text += " U ";
        text += "[" + piece.lo.to_string() + "," + piece.hi.to_string() + ")";
    }
    return text;
}

}  // namespace rnf
