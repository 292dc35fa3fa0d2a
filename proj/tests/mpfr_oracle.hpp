#pragma once
// Test-side high-precision reference: Kummer series and Hermite function
// at 256-bit precision, independent of the library implementation.
#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace mpfr_oracle {

// worst-case cancellation in the two-Kummer form on the supported
// envelope approaches 95 digits; 512 bits leaves a wide margin
constexpr mpfr_prec_t PREC = 512;

class Big {
public:
    Big() { mpfr_init2(v, PREC); mpfr_set_zero(v, 1); }
    explicit Big(double x) { mpfr_init2(v, PREC); mpfr_set_d(v, x, MPFR_RNDN); }
    Big(const Big& o) { mpfr_init2(v, PREC); mpfr_set(v, o.v, MPFR_RNDN); }
    Big& operator=(const Big& o)
    {
        if (this != &o) mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Big() { mpfr_clear(v); }

    double to_double() const { return mpfr_get_d(v, MPFR_RNDN); }
    mpfr_ptr get() { return v; }
    mpfr_srcptr get() const { return v; }

    friend Big operator+(const Big& a, const Big& b)
    {
        Big r; mpfr_add(r.v, a.v, b.v, MPFR_RNDN); return r;
    }
    friend Big operator-(const Big& a, const Big& b)
    {
        Big r; mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); return r;
    }
    friend Big operator*(const Big& a, const Big& b)
    {
        Big r; mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); return r;
    }
    friend Big operator/(const Big& a, const Big& b)
    {
        Big r; mpfr_div(r.v, a.v, b.v, MPFR_RNDN); return r;
    }
    Big abs() const { Big r; mpfr_abs(r.v, v, MPFR_RNDN); return r; }
    bool less(const Big& o) const { return mpfr_cmp(v, o.v) < 0; }
    bool is_zero() const { return mpfr_zero_p(v); }

private:
    mpfr_t v;
};

// M(a, b, x) by direct series, all argument arithmetic in full precision
inline Big kummer(const Big& a, const Big& b, const Big& x, int max_terms = 20000)
{
    double ad = a.to_double(), xd = x.to_double();
    Big term(1.0), sum(1.0);
    Big tiny(1e-110);
    for (int k = 0; k < max_terms; ++k) {
        if (ad + k == 0.0 && (a + Big(double(k))).is_zero()) return sum;
        term = term * (a + Big(double(k))) * x /
               ((b + Big(double(k))) * Big(double(k + 1)));
        sum = sum + term;
        if (k > (xd < 0 ? -xd : xd) + 16 &&
            term.abs().less(tiny * sum.abs() + tiny * tiny))
            return sum;
    }
    throw std::runtime_error("mpfr_oracle::kummer did not converge");
}

inline Big kummer(double a, double b, double x, int max_terms = 20000)
{
    return kummer(Big(a), Big(b), Big(x), max_terms);
}

inline Big rgamma(const Big& x)
{
    double xd = x.to_double();
    if (xd <= 0.0 && xd == static_cast<long long>(xd) &&
        (x - Big(xd)).is_zero())
        return Big(0.0);
    Big r, g;
    mpfr_gamma(g.get(), x.get(), MPFR_RNDN);
    mpfr_d_div(r.get(), 1.0, g.get(), MPFR_RNDN);
    return r;
}

inline Big rgamma(double x) { return rgamma(Big(x)); }

// H_nu(w) from the two-Kummer representation; w^2 and (1-nu)/2 are formed
// in full precision (a double-rounded w*w alone would poison the heavy
// cancellation between the two terms)
inline double hermite(double nu, double w)
{
    Big x = Big(w) * Big(w);
    Big half(0.5);
    Big a1 = Big(0.0) - Big(nu) * half;
    Big a2 = (Big(1.0) - Big(nu)) * half;
    Big m1 = kummer(a1, half, x);
    Big m2 = kummer(a2, Big(1.5), x);
    Big pre, sqrt_pi, two_nu;
    mpfr_const_pi(sqrt_pi.get(), MPFR_RNDN);
    mpfr_sqrt(sqrt_pi.get(), sqrt_pi.get(), MPFR_RNDN);
    Big nu_b(nu), two(2.0);
    mpfr_pow(two_nu.get(), two.get(), nu_b.get(), MPFR_RNDN);
    pre = two_nu * sqrt_pi;
    Big t1 = pre * m1 * rgamma(a2);
    Big t2 = pre * Big(2.0 * w) * m2 * rgamma(a1);
    return (t1 - t2).to_double();
}

inline double kummer_d(double a, double b, double x)
{
    return kummer(a, b, x).to_double();
}

// |lib - ref| as a double, with ref in high precision
inline double abs_err(double lib_value, const Big& ref)
{
    return (Big(lib_value) - ref).abs().to_double();
}

} // namespace mpfr_oracle
