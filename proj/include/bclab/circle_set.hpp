#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace bclab {

/// Finite union of closed intervals on R/Z with exact rational endpoints.
///
/// Normal form: intervals sorted by lower endpoint, interiors pairwise
/// disjoint, touching intervals merged. A component wrapping 0 == 1 is stored
/// split as [0,b] and [a,1], so the list stays globally sorted. Values are
/// immutable after construction.
class CircleSet {
   public:
    struct Interval {
        Rat lo;
        Rat hi;
        bool operator==(const Interval&) const = default;
    };

    CircleSet() = default;

    static CircleSet empty_set() { return CircleSet(); }

    static CircleSet full_circle() {
        CircleSet s;
        s.ivs_.push_back({Rat(0), Rat(1)});
        return s;
    }

    /// Builds from raw intervals with endpoints in [0,1], lo <= hi.
    static CircleSet from_intervals(std::vector<Interval> raw) {
        for (const auto& iv : raw) {
            if (iv.lo < 0 || iv.hi > 1 || iv.lo > iv.hi)
                throw std::invalid_argument("CircleSet: interval outside [0,1] or inverted");
        }
        CircleSet s;
        s.ivs_ = normalize(std::move(raw));
        return s;
    }

    /// Union of closed arcs ||x - center|| <= radius. Centers are reduced
    /// mod 1; radius >= 1/2 yields the full circle.
    static CircleSet from_arcs(const std::vector<std::pair<Rat, Rat>>& arcs) {
        std::vector<Interval> raw;
        raw.reserve(arcs.size() + 2);
        for (const auto& [center, radius] : arcs) {
            if (radius < 0) throw std::invalid_argument("from_arcs: negative radius");
            if (radius * 2 >= 1) return full_circle();
            Rat c = mod1(center);
            Rat lo = c - radius;
            Rat hi = c + radius;
            if (lo < 0) {
                raw.push_back({Rat(0), hi});
                raw.push_back({lo + 1, Rat(1)});
            } else if (hi > 1) {
                raw.push_back({lo, Rat(1)});
                raw.push_back({Rat(0), hi - 1});
            } else {
                raw.push_back({lo, hi});
            }
        }
        CircleSet s;
        s.ivs_ = normalize(std::move(raw));
        return s;
    }

    const std::vector<Interval>& intervals() const { return ivs_; }
    bool empty() const { return ivs_.empty(); }
    bool is_full() const { return measure() == 1; }
    size_t size() const { return ivs_.size(); }

    Rat measure() const {
        std::vector<Rat> lens;
        lens.reserve(ivs_.size());
        for (const auto& iv : ivs_) lens.push_back(iv.hi - iv.lo);
        return exact_sum(lens);
    }

    bool contains(const Rat& x) const {
        Rat y = mod1(x);
        for (const auto& iv : ivs_) {
            if (iv.lo <= y && y <= iv.hi) return true;
            if (iv.lo > y) break;
        }
        // x == 0 also lies in a component ending at 1.
        if (y == 0 && !ivs_.empty() && ivs_.back().hi == 1) return true;
        return false;
    }

    friend CircleSet unite(const CircleSet& a, const CircleSet& b) {
        std::vector<Interval> raw = a.ivs_;
        raw.insert(raw.end(), b.ivs_.begin(), b.ivs_.end());
        CircleSet s;
        s.ivs_ = normalize(std::move(raw));
        return s;
    }

    friend CircleSet intersect(const CircleSet& a, const CircleSet& b) {
        std::vector<Interval> out;
        size_t i = 0, j = 0;
        while (i < a.ivs_.size() && j < b.ivs_.size()) {
            const Interval& x = a.ivs_[i];
            const Interval& y = b.ivs_[j];
            Rat lo = std::max(x.lo, y.lo);
            Rat hi = std::min(x.hi, y.hi);
            if (lo < hi) out.push_back({lo, hi});
            // Single-point contacts are dropped, matching the normal form's
            // treatment of measure-zero endpoint overlaps.
            if (x.hi <= y.hi)
                ++i;
            else
                ++j;
        }
        CircleSet s;
        s.ivs_ = normalize(std::move(out));
        return s;
    }

    friend CircleSet complement(const CircleSet& a) {
        CircleSet s;
        if (a.ivs_.empty()) return full_circle();
        Rat cursor(0);
        for (const auto& iv : a.ivs_) {
            if (cursor < iv.lo) s.ivs_.push_back({cursor, iv.lo});
            cursor = std::max(cursor, iv.hi);
        }
        if (cursor < 1) s.ivs_.push_back({cursor, Rat(1)});
        return s;
    }

    /// Exact preimage of the set under x -> b*x (mod 1): the union of the b
    /// scaled translates (S + j)/b. Measure-preserving.
    CircleSet preimage_mul(unsigned long b) const {
        if (b < 2) throw std::invalid_argument("preimage_mul: b must be >= 2");
        std::vector<Interval> out;
        out.reserve(ivs_.size() * b);
        Rat bb(static_cast<long>(b));
        for (unsigned long j = 0; j < b; ++j) {
            Rat off(static_cast<long>(j));
            for (const auto& iv : ivs_) {
                out.push_back({rat_div(iv.lo + off, bb), rat_div(iv.hi + off, bb)});
            }
        }
        CircleSet s;
        s.ivs_ = normalize(std::move(out));
        return s;
    }

    bool operator==(const CircleSet&) const = default;

    static Rat mod1(const Rat& x) {
        Int fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
        return x - Rat(fl);
    }

   private:
    static Rat rat_div(const Rat& a, const Rat& b) {
        Rat r = a / b;
        r.canonicalize();
        return r;
    }

    static std::vector<Interval> normalize(std::vector<Interval> raw) {
        std::erase_if(raw, [](const Interval& iv) { return iv.lo == iv.hi; });
        std::sort(raw.begin(), raw.end(), [](const Interval& x, const Interval& y) {
            return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
        });
        std::vector<Interval> out;
        for (auto& iv : raw) {
            if (!out.empty() && iv.lo <= out.back().hi) {
                if (iv.hi > out.back().hi) out.back().hi = std::move(iv.hi);
            } else {
                out.push_back(std::move(iv));
            }
        }
        return out;
    }

    std::vector<Interval> ivs_;
};

}  // namespace bclab
