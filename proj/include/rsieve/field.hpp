#pragma once

#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"

namespace rsieve {

/// Element of Frac(R) in lowest terms with a canonical (positive or monic)
/// denominator. Zero is 0/1.
template <class R>
class FieldElement {
    using Ops = RingOps<R>;

   public:
    /// Placeholder for containers; assign before use.
    FieldElement() = default;
    explicit FieldElement(const FieldDescriptor& fd) : num_(Ops::zero(fd)), den_(Ops::one(fd)) {}
    FieldElement(R num, const FieldDescriptor& fd) : num_(std::move(num)), den_(Ops::one(fd)) {}
    FieldElement(R num, R den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    const R& num() const { return num_; }
    const R& den() const { return den_; }
    bool is_zero() const { return Ops::is_zero(num_); }
    bool is_integral() const { return Ops::is_one(den_); }

    FieldElement inverse() const {
        if (is_zero()) throw DivisionByZero();
        return FieldElement(den_, num_);
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) { return FieldElement(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) { return FieldElement(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) { return FieldElement(a.num_ * b.num_, a.den_ * b.den_); }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        if (b.is_zero()) throw DivisionByZero();
        return FieldElement(a.num_ * b.den_, a.den_ * b.num_);
    }
    FieldElement operator-() const {
        FieldElement r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    std::string to_string() const {
        if (Ops::is_one(den_)) return Ops::to_string(num_);
        return "(" + Ops::to_string(num_) + ")/(" + Ops::to_string(den_) + ")";
    }

   private:
    void normalize() {
        if (Ops::is_zero(den_)) throw DivisionByZero();
        if (Ops::is_zero(num_)) {
            den_ = Ops::divexact(den_, den_);
            return;
        }
        R g = Ops::gcd(num_, den_);
        if (!Ops::is_one(g)) {
            num_ = Ops::divexact(num_, g);
            den_ = Ops::divexact(den_, g);
        }
        R u = Ops::unit_inverse(Ops::unit(den_));
        if (!Ops::is_one(u)) {
            num_ = num_ * u;
            den_ = den_ * u;
        }
    }

    R num_{};
    R den_{};
};

using Rat = FieldElement<Integer>;
using RatFunc = FieldElement<FpPoly>;

/// Canonical associate of a ring tuple: content removed and first nonzero
/// entry positive (Z) or monic (F_q[T]). Returns the tuple and the factor
/// it was divided by.
template <class R>
std::pair<std::vector<R>, R> primitive_part(std::vector<R> v) {
    using Ops = RingOps<R>;
    R g{};
    bool any = false;
    for (const auto& x : v) {
        if (Ops::is_zero(x)) continue;
        g = any ? Ops::gcd(g, x) : Ops::gcd(x, x);
        any = true;
    }
    if (!any) throw ParameterError("primitive part of the zero vector");
    for (const auto& x : v) {
        if (!Ops::is_zero(x)) {
            g = g * Ops::unit(x);
            break;
        }
    }
    if (!Ops::is_one(g)) {
        for (auto& x : v) x = Ops::divexact(x, g);
    }
    return {std::move(v), std::move(g)};
}

/// Result of clearing denominators and content: primitive = scalar * input.
template <class R>
struct ContentSplit {
    FieldElement<R> scalar;
    std::vector<R> primitive;
};

template <class R>
ContentSplit<R> content_and_primitive(const std::vector<FieldElement<R>>& v) {
    using Ops = RingOps<R>;
    R lcm{};
    bool any = false;
    for (const auto& x : v) {
        if (x.is_zero()) continue;
        if (!any) {
            lcm = x.den();
            any = true;
        } else {
            lcm = Ops::divexact(lcm * x.den(), Ops::gcd(lcm, x.den()));
        }
    }
    if (!any) throw ParameterError("content of the zero vector");
    std::vector<R> w;
    w.reserve(v.size());
    for (const auto& x : v) w.push_back(Ops::divexact(x.num() * lcm, x.den()));
    auto [prim, g] = primitive_part(std::move(w));
    return {FieldElement<R>(lcm, g), std::move(prim)};
}

}  // namespace rsieve
