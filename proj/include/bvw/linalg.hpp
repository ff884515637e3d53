#ifndef BVW_LINALG_HPP
#define BVW_LINALG_HPP

#include <algorithm>
#include <functional>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace bvw {

/* Gaussian integers. Coefficient matrices get their denominators cleared
   column-wise, after which all elimination is fraction-free over Z[i]. */
struct GInt {
    Int re, im;

    GInt() = default;
    GInt(int n) : re(n) {}
    GInt(Int r, Int i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    GInt operator-() const { return GInt(-re, -im); }
    GInt operator+(const GInt& o) const { return GInt(re + o.re, im + o.im); }
    GInt operator-(const GInt& o) const { return GInt(re - o.re, im - o.im); }
    GInt operator*(const GInt& o) const
    {
        return GInt(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    bool operator==(const GInt& o) const { return re == o.re && im == o.im; }
    GInt conj() const { return GInt(re, -im); }
    Int norm() const { return re * re + im * im; }
};

inline Int floor_div(const Int& n, const Int& d) // d > 0
{
    Int q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

inline Int round_div(const Int& n, const Int& d) // d > 0, nearest
{
    return floor_div(2 * n + d, 2 * d);
}

/* nearest-lattice-point division, |a - q*b|^2 <= |b|^2 / 2 */
inline GInt gdiv_round(const GInt& a, const GInt& b)
{
    GInt num = a * b.conj();
    Int den = b.norm();
    return GInt(round_div(num.re, den), round_div(num.im, den));
}

/* the associate with re > 0, im >= 0 (zero stays zero) */
inline GInt unit_canonical(const GInt& a)
{
    GInt u = a;
    for (int k = 0; k < 3 && !(u.re > 0 && u.im >= 0); ++k)
        u = GInt(-u.im, u.re); // multiply by i
    return u;
}

inline GInt ggcd(GInt a, GInt b)
{
    while (!b.is_zero()) {
        GInt r = a - gdiv_round(a, b) * b;
        a = b;
        b = r;
    }
    return unit_canonical(a);
}

inline GInt gdiv_exact(const GInt& a, const GInt& b)
{
    GInt num = a * b.conj();
    Int den = b.norm();
    if (den == 0 || num.re % den != 0 || num.im % den != 0)
        throw error("inexact gaussian division");
    return GInt(num.re / den, num.im / den);
}

/* sparse column: (row, value), rows strictly ascending */
using SparseVec = std::vector<std::pair<int, GInt>>;

inline const GInt* sv_at(const SparseVec& v, int row)
{
    auto it = std::lower_bound(v.begin(), v.end(), row,
                               [](auto& e, int r) { return e.first < r; });
    if (it == v.end() || it->first != row) return nullptr;
    return &it->second;
}

inline SparseVec sv_axpby(const GInt& a, const SparseVec& x,
                          const GInt& b, const SparseVec& y)
{
    SparseVec r;
    r.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            GInt v = a * x[i].second;
            if (!v.is_zero()) r.emplace_back(x[i].first, std::move(v));
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            GInt v = b * y[j].second;
            if (!v.is_zero()) r.emplace_back(y[j].first, std::move(v));
            ++j;
        } else {
            GInt v = a * x[i].second + b * y[j].second;
            if (!v.is_zero()) r.emplace_back(x[i].first, std::move(v));
            ++i; ++j;
        }
    }
    return r;
}

inline GInt sv_content(const SparseVec& v, GInt g = GInt(0))
{
    for (auto& [r, c] : v) {
        g = ggcd(g, c);
        if (g == GInt(1)) break;
    }
    return g;
}

inline void sv_divide(SparseVec& v, const GInt& g)
{
    for (auto& [r, c] : v) c = gdiv_exact(c, g);
}

inline void sv_scale(SparseVec& v, const GInt& g)
{
    for (auto& [r, c] : v) c = c * g;
}

/* Incremental fraction-free echelon form. Pivots are chosen as the first
   nonzero row of the reduced column under an optional custom row order, so
   both the rank and the surviving columns are deterministic. Companion
   vectors ride along for kernel extraction. */
class Echelon {
public:
    struct Pivot {
        int row;
        GInt val;
        SparseVec col, comp;
    };

    Echelon() = default;
    explicit Echelon(std::function<long long(int)> row_key)
        : key_(std::move(row_key)) {}

    /* returns the pivot row, or -1 when the column lies in the current span;
       in the latter case *kernel (if given) receives the companion, which
       encodes the dependency on previously inserted columns */
    int insert(SparseVec col, SparseVec comp = {}, SparseVec* kernel = nullptr)
    {
        reduce(col, comp);
        if (col.empty()) {
            if (kernel) {
                GInt g = sv_content(comp);
                if (!g.is_zero()) sv_divide(comp, g);
                *kernel = std::move(comp);
            }
            return -1;
        }
        Pivot p;
        p.row = pick_row(col);
        normalize(col, comp, p.row);
        p.val = *sv_at(col, p.row);
        p.col = std::move(col);
        p.comp = std::move(comp);
        piv_.push_back(std::move(p));
        return piv_.back().row;
    }

    bool in_span(SparseVec col) const
    {
        SparseVec comp;
        reduce(col, comp);
        return col.empty();
    }

    int rank() const { return (int)piv_.size(); }
    const std::vector<Pivot>& pivots() const { return piv_; }

    void reduce(SparseVec& col, SparseVec& comp) const
    {
        for (auto& p : piv_) {
            const GInt* b = sv_at(col, p.row);
            if (!b) continue;
            GInt bb = *b;
            comp = sv_axpby(p.val, comp, -bb, p.comp);
            col = sv_axpby(p.val, col, -bb, p.col);
            GInt g = sv_content(col, sv_content(comp));
            if (!g.is_zero() && !(g == GInt(1))) {
                sv_divide(col, g);
                sv_divide(comp, g);
            }
        }
    }

private:
    int pick_row(const SparseVec& col) const
    {
        int best = col.front().first;
        if (key_) {
            long long bk = key_(best);
            for (auto& [r, c] : col) {
                long long k = key_(r);
                if (k < bk) { bk = k; best = r; }
            }
        }
        return best;
    }

    void normalize(SparseVec& col, SparseVec& comp, int row)
    {
        GInt g = sv_content(col, sv_content(comp));
        if (!g.is_zero() && !(g == GInt(1))) {
            sv_divide(col, g);
            sv_divide(comp, g);
        }
        /* rotate so the pivot value sits in the first quadrant */
        GInt v = *sv_at(col, row);
        GInt u = gdiv_exact(unit_canonical(v), v);
        if (!(u == GInt(1))) {
            sv_scale(col, u);
            sv_scale(comp, u);
        }
    }

    std::function<long long(int)> key_;
    std::vector<Pivot> piv_;
};

/* clear denominators of a rational column; entries must be row-sorted */
inline SparseVec clear_denominators(const std::vector<std::pair<int, GRat>>& col)
{
    Int l = 1;
    for (auto& [r, c] : col) {
        Int dr = denominator(c.re), di = denominator(c.im);
        l = lcm(l, lcm(dr, di));
    }
    SparseVec out;
    out.reserve(col.size());
    for (auto& [r, c] : col) {
        GInt v(numerator(c.re) * (l / denominator(c.re)),
               numerator(c.im) * (l / denominator(c.im)));
        if (!v.is_zero()) out.emplace_back(r, std::move(v));
    }
    return out;
}

struct KernelResult {
    int rank = 0;
    std::vector<SparseVec> kernel; // coordinates w.r.t. the inserted columns
};

inline KernelResult rank_and_kernel(const std::vector<SparseVec>& cols)
{
    Echelon e;
    KernelResult out;
    int j = 0;
    for (auto& c : cols) {
        SparseVec comp{{j, GInt(1)}}, k;
        if (e.insert(c, std::move(comp), &k) < 0) out.kernel.push_back(std::move(k));
        ++j;
    }
    out.rank = e.rank();
    return out;
}

} // namespace bvw

#endif
