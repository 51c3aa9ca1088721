#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "ring.hpp"

namespace rsieve {

/// Projective point stored by its canonical primitive representative:
/// ring coordinates with unit content whose first nonzero entry is
/// positive (Z) or monic (F_q[T]).
template <class R>
class ProjPoint {
   public:
    ProjPoint() = default;

    /// Canonicalizes any nonzero ring tuple.
    static ProjPoint from_ring(std::vector<R> coords) {
        ProjPoint p;
        p.coords_ = primitive_part(std::move(coords)).first;
        return p;
    }

    static ProjPoint from_field(const std::vector<FieldElement<R>>& coords) {
        ProjPoint p;
        p.coords_ = content_and_primitive(coords).primitive;
        return p;
    }

    /// Affine embedding x -> (1 : x).
    static ProjPoint from_affine(const std::vector<FieldElement<R>>& x, const FieldDescriptor& fd) {
        std::vector<FieldElement<R>> c;
        c.reserve(x.size() + 1);
        c.emplace_back(RingOps<R>::one(fd), fd);
        c.insert(c.end(), x.begin(), x.end());
        return from_field(c);
    }

    const std::vector<R>& coords() const { return coords_; }
    std::size_t dimension() const { return coords_.size() - 1; }

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return compare_tuples(a.coords_, b.coords_) < 0; }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (i) s += " : ";
            s += RingOps<R>::to_string(coords_[i]);
        }
        return s + ")";
    }

   private:
    std::vector<R> coords_;
};

template <class R>
struct ProjPointHash {
    std::size_t operator()(const ProjPoint<R>& p) const { return VectorHash<R>{}(p.coords()); }
};

/// H(x) of a projective point: max height of its primitive coordinates.
template <class R>
HeightValue height_projective(const ProjPoint<R>& p, const FieldDescriptor& fd) {
    return max_height(p.coords(), fd);
}

/// A deduplicated set of points of P^n(K) with a declared height bound N.
template <class R>
class PointSet {
   public:
    PointSet() = default;
    PointSet(FieldDescriptor fd, std::size_t n, HeightValue bound) : fd_(fd), n_(n), bound_(std::move(bound)) {}

    /// Adds a point; returns false for a duplicate. Throws InputError on a
    /// wrong dimension or a height above the declared bound.
    bool insert(ProjPoint<R> p) {
        if (p.dimension() != n_) throw InputError("point " + p.to_string() + " has dimension " + std::to_string(p.dimension()) + ", expected " + std::to_string(n_));
        if (height_projective(p, fd_) > bound_) throw InputError("point " + p.to_string() + " exceeds the declared height bound " + bound_.to_string());
        if (!seen_.insert(p).second) return false;
        points_.push_back(std::move(p));
        return true;
    }

    const FieldDescriptor& field() const { return fd_; }
    std::size_t n() const { return n_; }
    const HeightValue& bound() const { return bound_; }
    const std::vector<ProjPoint<R>>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    /// Subset by index list, keeping field, dimension and bound.
    PointSet subset(const std::vector<std::size_t>& idx) const {
        PointSet s(fd_, n_, bound_);
        for (auto i : idx) s.insert(points_.at(i));
        return s;
    }

   private:
    FieldDescriptor fd_;
    std::size_t n_ = 0;
    HeightValue bound_;
    std::vector<ProjPoint<R>> points_;
    std::unordered_set<ProjPoint<R>, ProjPointHash<R>> seen_;
};

}  // namespace rsieve
