#ifndef BVW_RATIONAL_HPP
#define BVW_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bvw {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
    explicit error(const std::string& m) : std::runtime_error(m) {}
};

inline std::string rat_str(const Rat& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

/* Rational coefficients extended by the imaginary unit.  The quantum side of
   the library (i*hbar factors, the iB*Cbar' term) needs exactly this and no
   more, so we keep a plain re/im pair instead of pulling in a generic
   number-field type. */
struct GRat {
    Rat re, im;

    GRat() = default;
    GRat(int n) : re(n) {}
    GRat(const Rat& r) : re(r) {}
    GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GRat i_unit() { return GRat(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GRat operator-() const { return GRat(-re, -im); }
    GRat operator+(const GRat& o) const { return GRat(re + o.re, im + o.im); }
    GRat operator-(const GRat& o) const { return GRat(re - o.re, im - o.im); }
    GRat operator*(const GRat& o) const
    {
        return GRat(re * o.re - im * o.im, re * o.im + im * o.re);
    }
    GRat& operator+=(const GRat& o) { re += o.re; im += o.im; return *this; }
    GRat& operator-=(const GRat& o) { re -= o.re; im -= o.im; return *this; }
    GRat& operator*=(const GRat& o) { *this = *this * o; return *this; }

    GRat conj() const { return GRat(re, -im); }
    Rat norm() const { return re * re + im * im; }

    GRat operator/(const GRat& o) const
    {
        Rat n = o.norm();
        if (n == 0) throw error("division by zero");
        GRat p = *this * o.conj();
        return GRat(p.re / n, p.im / n);
    }

    bool operator==(const GRat& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GRat& o) const { return !(*this == o); }

    /* sign used for +/- absorption when printing */
    int print_sign() const
    {
        if (re != 0) return re > 0 ? 1 : -1;
        if (im != 0) return im > 0 ? 1 : -1;
        return 0;
    }
};

/* canonical rendering: "p/q", "i", "-i", "p/q*i", "(p/q+r/s*i)" */
inline std::string grat_str(const GRat& c)
{
    if (c.im == 0) return rat_str(c.re);
    std::string imp;
    if (c.im == 1) imp = "i";
    else if (c.im == -1) imp = "-i";
    else imp = rat_str(c.im) + "*i";
    if (c.re == 0) return imp;
    std::string s = "(" + rat_str(c.re);
    if (c.im > 0) s += "+" + imp;
    else s += "-" + (c.im == -1 ? std::string("i") : rat_str(-c.im) + "*i");
    return s + ")";
}

/* FNV-1a 64-bit, used for the deterministic model hash in reports */
inline std::string fnv1a_hex(const std::string& data)
{
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hexd = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[k] = hexd[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace bvw

#endif
