#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "su2e/model.hpp"

namespace su2e {

// Monomials x^i y^j z^k with i + j + k <= order, graded.
struct JetLayout {
    int order;
    std::vector<std::array<int, 3>> mono;
    std::vector<std::vector<std::pair<int, int>>> products;  // products[m] = pairs (p, q) with p * q = m

    static const JetLayout& get(int order) {
        static const std::array<JetLayout, 5> all = {make(0), make(1), make(2), make(3), make(4)};
        if (order < 0 || order > 4) throw DomainError("jet order out of range");
        return all[order];
    }
    int index(int i, int j, int k) const { return idx_.at({i, j, k}); }
    int degree(int m) const { return mono[m][0] + mono[m][1] + mono[m][2]; }

private:
    std::map<std::array<int, 3>, int> idx_;
    static JetLayout make(int order) {
        JetLayout L;
        L.order = order;
        for (int d = 0; d <= order; ++d)
            for (int i = d; i >= 0; --i)
                for (int j = d - i; j >= 0; --j) {
                    L.idx_[{i, j, d - i - j}] = static_cast<int>(L.mono.size());
                    L.mono.push_back({i, j, d - i - j});
                }
        L.products.resize(L.mono.size());
        for (size_t p = 0; p < L.mono.size(); ++p)
            for (size_t q = 0; q < L.mono.size(); ++q) {
                const auto& a = L.mono[p];
                const auto& b = L.mono[q];
                if (a[0] + a[1] + a[2] + b[0] + b[1] + b[2] > order) continue;
                L.products[L.idx_[{a[0] + b[0], a[1] + b[1], a[2] + b[2]}]].push_back({int(p), int(q)});
            }
        return L;
    }
};

// Truncated Taylor jet in three variables over a scalar type S. Absent
// coefficients are zero, so S never has to supply its own zero.
template <class S>
struct Jet {
    const JetLayout* lay = nullptr;
    std::vector<std::optional<S>> c;

    Jet() = default;
    explicit Jet(int order) : lay(&JetLayout::get(order)), c(lay->mono.size()) {}
    static Jet constant(const S& v, int order) {
        Jet j(order);
        j.c[0] = v;
        return j;
    }
    // v + x_var
    static Jet variable(const S& v, const S& one, int var, int order) {
        Jet j = constant(v, order);
        std::array<int, 3> e{0, 0, 0};
        e[var] = 1;
        j.c[j.lay->index(e[0], e[1], e[2])] = one;
        return j;
    }
    const S& value() const { return *c[0]; }
    bool has(int i, int j, int k) const { return c[lay->index(i, j, k)].has_value(); }
    const std::optional<S>& at(int i, int j, int k) const { return c[lay->index(i, j, k)]; }
};

namespace detail {
template <class S>
void acc_add(std::optional<S>& dst, const S& v) {
    if (dst) *dst = *dst + v;
    else dst = v;
}
template <class S>
void acc_sub(std::optional<S>& dst, const S& v) {
    if (dst) *dst = *dst - v;
    else dst = -v;
}
}  // namespace detail

template <class S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
    Jet<S> r = a;
    for (size_t m = 0; m < b.c.size(); ++m)
        if (b.c[m]) detail::acc_add(r.c[m], *b.c[m]);
    return r;
}

template <class S>
Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
    Jet<S> r = a;
    for (size_t m = 0; m < b.c.size(); ++m)
        if (b.c[m]) detail::acc_sub(r.c[m], *b.c[m]);
    return r;
}

template <class S>
Jet<S> operator-(const Jet<S>& a) {
    Jet<S> r = a;
    for (auto& x : r.c)
        if (x) x = -*x;
    return r;
}

template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
    Jet<S> r(a.lay->order);
    for (size_t m = 0; m < r.c.size(); ++m)
        for (const auto& [p, q] : a.lay->products[m])
            if (a.c[p] && b.c[q]) detail::acc_add(r.c[m], *a.c[p] * *b.c[q]);
    return r;
}

// Lifts scalar ops to jets. recip(x) = (1/v) sum_k (-u/v)^k with v the value.
template <class S, class Ops>
struct JetOps {
    Ops* base;
    int order;
    Jet<S> c(const Rational& q) const { return Jet<S>::constant(base->c(q), order); }
    Jet<S> recip(const Jet<S>& x, RecipTag tag) const {
        const S iv = base->recip(x.value(), tag);
        Jet<S> u = x;
        u.c[0].reset();
        const Jet<S> w = -(u * Jet<S>::constant(iv, order));
        Jet<S> sum = Jet<S>::constant(iv, order);
        Jet<S> pw = Jet<S>::constant(iv, order);
        for (int k = 1; k <= order; ++k) {
            pw = pw * w;
            sum = sum + pw;
        }
        return sum;
    }
};

}  // namespace su2e
