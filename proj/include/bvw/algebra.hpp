#ifndef BVW_ALGEBRA_HPP
#define BVW_ALGEBRA_HPP

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "series.hpp"

namespace bvw {

/* A generator of the graded algebra. Every field comes with its antifield;
   the two sit next to each other in the generator list and point at each
   other through `pair`. */
struct Generator {
    std::string id;
    int gh = 0, pg = 0, af = 0, ta = 0;
    bool anti = false;
    int pair = -1;
    Rat nu = 1; // measure for the antibracket pairing (1/w on a lattice)
    bool odd() const { return (gh % 2) != 0; }
};

inline std::string antifield_name(const std::string& id)
{
    auto p = id.find('(');
    if (p == std::string::npos) return id + "'";
    return id.substr(0, p) + "'" + id.substr(p);
}

class Algebra {
public:
    Trunc trunc;

    /* Adds a field together with its antifield. Antifield gradings follow
       from the field's ghost number: gh' = -gh-1, af' = max(1,-gh'),
       pg' = gh'+af'. The antighost is the one generator allowed to break
       gh = pg - af (it carries gh=-1, pg=0, af=0); callers flag it. */
    int add_pair(const std::string& id, int gh, int pg, int af,
                 const Rat& nu = Rat(1), bool exempt = false)
    {
        if (index_.count(id)) throw error("duplicate generator: " + id);
        if (!exempt && gh != pg - af)
            throw error("grading violation for " + id + ": gh != pg - af");
        int fi = (int)gens_.size();
        Generator f{id, gh, pg, af, 0, false, fi + 1, nu};
        int agh = -gh - 1;
        int aaf = std::max(1, -agh);
        Generator a{antifield_name(id), agh, agh + aaf, aaf, 1, true, fi, nu};
        if (index_.count(a.id)) throw error("duplicate generator: " + a.id);
        gens_.push_back(f);
        gens_.push_back(a);
        index_[f.id] = fi;
        index_[a.id] = fi + 1;
        return fi;
    }

    int size() const { return (int)gens_.size(); }
    const Generator& gen(int i) const { return gens_[(size_t)i]; }
    int index(const std::string& id) const
    {
        auto it = index_.find(id);
        if (it == index_.end()) throw error("undeclared identifier: " + id);
        return it->second;
    }
    bool has(const std::string& id) const { return index_.count(id) != 0; }

private:
    std::vector<Generator> gens_;
    std::map<std::string, int> index_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/* Monomial: even part as sorted (generator, exponent) pairs, odd part as a
   strictly ascending index list. Empty monomial is 1. */
struct Mono {
    std::vector<std::pair<int, int>> ev;
    std::vector<int> od;

    int degree() const
    {
        int d = (int)od.size();
        for (auto& [g, e] : ev) d += e;
        return d;
    }

    /* merged generator word, ascending, with multiplicity */
    std::vector<int> word() const
    {
        std::vector<int> w;
        size_t i = 0, j = 0;
        while (i < ev.size() || j < od.size()) {
            if (j == od.size() || (i < ev.size() && ev[i].first < od[j])) {
                for (int k = 0; k < ev[i].second; ++k) w.push_back(ev[i].first);
                ++i;
            } else {
                w.push_back(od[j]);
                ++j;
            }
        }
        return w;
    }

    bool operator==(const Mono& o) const { return ev == o.ev && od == o.od; }
    bool operator<(const Mono& o) const
    {
        int da = degree(), db = o.degree();
        if (da != db) return da < db;
        return word() < o.word();
    }
};

/* product of monomials; returns sign (0 when a shared odd generator kills it) */
inline int mono_mul(const Mono& a, const Mono& b, Mono& out)
{
    out.ev.clear();
    out.od.clear();
    size_t i = 0, j = 0;
    while (i < a.ev.size() || j < b.ev.size()) {
        if (j == b.ev.size() || (i < a.ev.size() && a.ev[i].first < b.ev[j].first))
            out.ev.push_back(a.ev[i++]);
        else if (i == a.ev.size() || b.ev[j].first < a.ev[i].first)
            out.ev.push_back(b.ev[j++]);
        else {
            out.ev.emplace_back(a.ev[i].first, a.ev[i].second + b.ev[j].second);
            ++i; ++j;
        }
    }
    /* each b-odd walks left past the a-odds exceeding it */
    int swaps = 0;
    for (int g : b.od)
        swaps += (int)(a.od.end() -
                       std::upper_bound(a.od.begin(), a.od.end(), g));
    out.od.resize(a.od.size() + b.od.size());
    std::merge(a.od.begin(), a.od.end(), b.od.begin(), b.od.end(), out.od.begin());
    for (size_t k = 1; k < out.od.size(); ++k)
        if (out.od[k] == out.od[k - 1]) return 0;
    return (swaps % 2) ? -1 : 1;
}

/* Polynomial: monomials mapped to truncated series coefficients. */
class Poly {
public:
    using Map = std::map<Mono, Series>;

    Poly() = default;
    explicit Poly(AlgebraPtr a) : alg_(std::move(a)) {}

    static Poly zero(AlgebraPtr a) { return Poly(std::move(a)); }
    static Poly constant(AlgebraPtr a, const GRat& c)
    {
        Poly p(a);
        p.add(Mono{}, Series::scalar(c, a->trunc));
        return p;
    }
    static Poly one(AlgebraPtr a) { return constant(std::move(a), GRat(1)); }
    static Poly generator(AlgebraPtr a, int idx)
    {
        Mono m;
        if (a->gen(idx).odd()) m.od.push_back(idx);
        else m.ev.emplace_back(idx, 1);
        Poly p(a);
        p.add(m, Series::scalar(GRat(1), a->trunc));
        return p;
    }

    const AlgebraPtr& algebra() const { return alg_; }
    const Map& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    void add(const Mono& m, const Series& s)
    {
        if (s.is_zero()) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, s);
        } else {
            it->second += s;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    Series coeff(const Mono& m) const
    {
        auto it = t_.find(m);
        return it == t_.end() ? Series(alg_ ? alg_->trunc : Trunc{}) : it->second;
    }

    Poly operator+(const Poly& o) const
    {
        Poly r = *this;
        for (auto& [m, s] : o.t_) r.add(m, s);
        return r;
    }
    Poly operator-() const
    {
        Poly r(alg_);
        for (auto& [m, s] : t_) r.t_.emplace(m, -s);
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const
    {
        Poly r(alg_ ? alg_ : o.alg_);
        Mono m;
        for (auto& [ma, sa] : t_)
            for (auto& [mb, sb] : o.t_) {
                int sg = mono_mul(ma, mb, m);
                if (sg == 0) continue;
                Series s = sa * sb;
                if (sg < 0) s = -s;
                r.add(m, s);
            }
        return r;
    }
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly scaled(const Series& s) const
    {
        Poly r(alg_);
        for (auto& [m, v] : t_) r.add(m, v * s);
        return r;
    }
    Poly scaled(const GRat& c) const
    {
        return scaled(Series::scalar(c, alg_->trunc));
    }
    /* multiply by c * h^dh * l^dl */
    Poly shifted(int dh, int dl, const GRat& c) const
    {
        Poly r(alg_);
        for (auto& [m, v] : t_) r.add(m, v.shifted(dh, dl, c));
        return r;
    }

    bool operator==(const Poly& o) const { return t_ == o.t_; }

    /* left derivative d/d(gen idx) */
    Poly ld(int idx) const
    {
        Poly r(alg_);
        bool odd = alg_->gen(idx).odd();
        for (auto& [m, s] : t_) {
            if (odd) {
                auto it = std::lower_bound(m.od.begin(), m.od.end(), idx);
                if (it == m.od.end() || *it != idx) continue;
                Mono d = m;
                size_t k = (size_t)(it - m.od.begin());
                d.od.erase(d.od.begin() + (long)k);
                r.add(d, (k % 2) ? -s : s);
            } else {
                auto it = std::find_if(m.ev.begin(), m.ev.end(),
                                       [&](auto& p) { return p.first == idx; });
                if (it == m.ev.end()) continue;
                Mono d = m;
                size_t k = (size_t)(it - m.ev.begin());
                int e = d.ev[k].second;
                if (e == 1) d.ev.erase(d.ev.begin() + (long)k);
                else d.ev[k].second = e - 1;
                r.add(d, s * Series::scalar(GRat(e), s.trunc()));
            }
        }
        return r;
    }

    std::set<int> variables() const
    {
        std::set<int> v;
        for (auto& [m, s] : t_) {
            for (auto& [g, e] : m.ev) v.insert(g);
            for (int g : m.od) v.insert(g);
        }
        return v;
    }

    int max_degree() const
    {
        int d = 0;
        for (auto& [m, s] : t_) d = std::max(d, m.degree());
        return d;
    }

    std::string str() const
    {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, s] : t_) {
            auto [txt, neg] = term_str(m, s);
            if (first) out += neg ? "-" + txt : txt;
            else out += (neg ? " - " : " + ") + txt;
            first = false;
        }
        return out;
    }

    std::string mono_str(const Mono& m) const
    {
        if (m.ev.empty() && m.od.empty()) return "1";
        std::vector<int> w = m.word();
        std::string out;
        for (size_t i = 0; i < w.size();) {
            size_t j = i;
            while (j < w.size() && w[j] == w[i]) ++j;
            if (!out.empty()) out += "*";
            out += alg_->gen(w[i]).id;
            if (j - i > 1) out += "^" + std::to_string(j - i);
            i = j;
        }
        return out;
    }

private:
    /* term text plus a flag for the sign the caller absorbs into +/- */
    std::pair<std::string, bool> term_str(const Mono& m, const Series& s) const
    {
        bool unit_mono = m.ev.empty() && m.od.empty();
        if (s.terms().size() == 1) {
            auto& [k, c] = *s.terms().begin();
            bool neg = c.print_sign() < 0;
            GRat a = neg ? -c : c;
            if (unit_mono) return {Series::entry_str(a, k.h, k.l), neg};
            if (k.h == 0 && k.l == 0 && a == GRat(1))
                return {mono_str(m), neg};
            return {Series::entry_str(a, k.h, k.l) + "*" + mono_str(m), neg};
        }
        if (unit_mono) return {"(" + s.str() + ")", false};
        return {"(" + s.str() + ")*" + mono_str(m), false};
    }

    AlgebraPtr alg_;
    Map t_;
};

/* grading of a polynomial; each value is meaningful only when the matching
   homogeneity flag is set */
struct Grading {
    int gh = 0, af = 0, pg = 0, ta = 0, parity = 0;
    bool hom_gh = true, hom_af = true, hom_pg = true, hom_ta = true,
         hom_parity = true;
};

inline int mono_grade(const Algebra& a, const Mono& m, int Generator::*field)
{
    int g = 0;
    for (auto& [i, e] : m.ev) g += a.gen(i).*field * e;
    for (int i : m.od) g += a.gen(i).*field;
    return g;
}

inline Grading grading(const Poly& p)
{
    Grading g;
    const Algebra& a = *p.algebra();
    bool first = true;
    for (auto& [m, s] : p.terms()) {
        int gh = mono_grade(a, m, &Generator::gh);
        int af = mono_grade(a, m, &Generator::af);
        int pg = mono_grade(a, m, &Generator::pg);
        int ta = mono_grade(a, m, &Generator::ta);
        int par = (int)(m.od.size() % 2);
        if (first) {
            g = Grading{gh, af, pg, ta, par};
            first = false;
        } else {
            if (gh != g.gh) g.hom_gh = false;
            if (af != g.af) g.hom_af = false;
            if (pg != g.pg) g.hom_pg = false;
            if (ta != g.ta) g.hom_ta = false;
            if (par != g.parity) g.hom_parity = false;
        }
    }
    return g;
}

inline int ghost_number(const Poly& p)
{
    Grading g = grading(p);
    if (!g.hom_gh) throw error("polynomial not homogeneous in ghost number");
    return g.gh;
}

inline int parity(const Poly& p)
{
    Grading g = grading(p);
    if (!g.hom_parity) throw error("polynomial not homogeneous in parity");
    return g.parity;
}

/* split into the even/odd parts; [0] even, [1] odd */
inline std::array<Poly, 2> parity_parts(const Poly& p)
{
    std::array<Poly, 2> r{Poly(p.algebra()), Poly(p.algebra())};
    for (auto& [m, s] : p.terms()) r[m.od.size() % 2].add(m, s);
    return r;
}

/* part with total antifield number exactly `a` */
inline Poly component_af(const Poly& p, int a)
{
    Poly r(p.algebra());
    for (auto& [m, s] : p.terms())
        if (mono_grade(*p.algebra(), m, &Generator::af) == a) r.add(m, s);
    return r;
}

/* part with total antifield *count* (#ta) exactly `t` */
inline Poly component_ta(const Poly& p, int t)
{
    Poly r(p.algebra());
    for (auto& [m, s] : p.terms())
        if (mono_grade(*p.algebra(), m, &Generator::ta) == t) r.add(m, s);
    return r;
}

inline Poly component_gh(const Poly& p, int gh)
{
    Poly r(p.algebra());
    for (auto& [m, s] : p.terms())
        if (mono_grade(*p.algebra(), m, &Generator::gh) == gh) r.add(m, s);
    return r;
}

/* substitute polynomials for generators (identity where unmapped); images
   must match the parity of what they replace */
inline Poly substitute(const Poly& p, const std::map<int, Poly>& img)
{
    AlgebraPtr alg = p.algebra();
    for (auto& [g, q] : img) {
        Grading gr = grading(q);
        if (!q.is_zero() && (!gr.hom_parity || gr.parity != (alg->gen(g).odd() ? 1 : 0)))
            throw error("substitution image changes parity of " + alg->gen(g).id);
    }
    auto image = [&](int g) -> Poly {
        auto it = img.find(g);
        return it == img.end() ? Poly::generator(alg, g) : it->second;
    };
    Poly out(alg);
    for (auto& [m, s] : p.terms()) {
        Poly term = Poly::constant(alg, GRat(1)).scaled(s);
        for (int g : m.word()) term *= image(g);
        out += term;
    }
    return out;
}

} // namespace bvw

#endif
