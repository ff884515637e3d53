#ifndef BVW_SERIES_HPP
#define BVW_SERIES_HPP

#include <map>
#include <utility>

#include "rational.hpp"

namespace bvw {

struct Trunc {
    int kh = 2, kl = 2;
    bool operator==(const Trunc&) const = default;
};

/* Truncated bivariate series in hbar ("h") and the coupling ("l").
   lambda powers are >= 0; hbar powers may go negative but never below
   -lambda_power (the only source of 1/h is an exponential of i*V/h with V
   carrying a lambda factor), which keeps everything bounded below. */
class Series {
public:
    /* key ordered by (lambda, hbar): constant term first when printing */
    struct Key {
        int h = 0, l = 0;
        bool operator<(const Key& o) const
        {
            if (l != o.l) return l < o.l;
            return h < o.h;
        }
        bool operator==(const Key& o) const { return h == o.h && l == o.l; }
    };
    using Map = std::map<Key, GRat>;

    Series() = default;
    explicit Series(Trunc tr) : tr_(tr) {}

    static Series scalar(const GRat& c, Trunc tr)
    {
        Series s(tr);
        s.add_term(0, 0, c);
        return s;
    }

    Trunc trunc() const { return tr_; }
    const Map& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add_term(int h, int l, const GRat& c)
    {
        if (c.is_zero()) return;
        if (l < 0) throw error("negative lambda power");
        if (h < -l) throw error("hbar power below -lambda power (missing lambda factor)");
        if (h > tr_.kh || l > tr_.kl) return; // truncated away
        auto it = t_.find(Key{h, l});
        if (it == t_.end()) {
            t_.emplace(Key{h, l}, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    GRat coeff(int h, int l) const
    {
        auto it = t_.find(Key{h, l});
        return it == t_.end() ? GRat() : it->second;
    }

    Series operator+(const Series& o) const
    {
        Series r = *this;
        for (auto& [k, c] : o.t_) r.add_term(k.h, k.l, c);
        return r;
    }
    Series operator-() const
    {
        Series r(tr_);
        for (auto& [k, c] : t_) r.t_.emplace(k, -c);
        return r;
    }
    Series operator-(const Series& o) const { return *this + (-o); }
    Series operator*(const Series& o) const
    {
        Series r(tr_);
        for (auto& [ka, ca] : t_)
            for (auto& [kb, cb] : o.t_)
                r.add_term(ka.h + kb.h, ka.l + kb.l, ca * cb);
        return r;
    }
    Series& operator+=(const Series& o) { *this = *this + o; return *this; }
    Series& operator*=(const Series& o) { *this = *this * o; return *this; }

    /* multiply by c * h^dh * l^dl */
    Series shifted(int dh, int dl, const GRat& c) const
    {
        Series r(tr_);
        for (auto& [k, v] : t_) r.add_term(k.h + dh, k.l + dl, v * c);
        return r;
    }

    bool operator==(const Series& o) const { return t_ == o.t_; }

    /* smallest lambda power present (INT_MAX-ish when zero) */
    int lambda_valuation() const
    {
        int v = 1 << 20;
        for (auto& [k, c] : t_)
            if (k.l < v) v = k.l;
        return v;
    }

    std::string str() const
    {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [k, c] : t_) {
            GRat a = c;
            if (first) {
                if (a.print_sign() < 0) { out += "-"; a = -a; }
            } else {
                if (a.print_sign() < 0) { out += " - "; a = -a; }
                else out += " + ";
            }
            out += entry_str(a, k.h, k.l);
            first = false;
        }
        return out;
    }

    static std::string entry_str(const GRat& c, int h, int l)
    {
        std::string s = grat_str(c);
        if (h != 0) s += "*h^" + std::to_string(h);
        if (l != 0) s += "*l^" + std::to_string(l);
        return s;
    }

private:
    Map t_;
    Trunc tr_;
};

} // namespace bvw

#endif
