#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ssforge {

using Complex = std::complex<double>;

/// Euclidean pairing of complex numbers viewed as plane vectors:
/// <a,b> = Re(a * conj(b)).  In particular <1,w> = Re w and <i,w> = Im w.
inline double pairing(Complex a, Complex b) {
    return a.real() * b.real() + a.imag() * b.imag();
}

/// |a|^2 without the square root.
inline double abs2(Complex a) { return std::norm(a); }

/// Thrown when an evaluation hits a pole, a log/pow branch point, or a
/// geometric singularity (g' = 0, detV = 0).
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Second-order jet of a holomorphic function at a point: value, first and
/// second complex derivatives.  Arithmetic follows the sum/product/quotient
/// rules, elementary functions the chain rule, so evaluating an expression
/// once in jet arithmetic yields F, F', F'' simultaneously.
struct Jet2 {
    Complex v{};
    Complex d1{};
    Complex d2{};

    static Jet2 constant(Complex c) { return {c, 0.0, 0.0}; }
    /// Jet of the identity function at z.
    static Jet2 variable(Complex z) { return {z, 1.0, 0.0}; }

    bool operator==(const Jet2&) const = default;
};

inline Jet2 jet_add(const Jet2& a, const Jet2& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

inline Jet2 jet_sub(const Jet2& a, const Jet2& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

inline Jet2 jet_neg(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

inline Jet2 jet_mul(const Jet2& a, const Jet2& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 jet_div(const Jet2& a, const Jet2& b) {
    if (abs2(b.v) == 0.0)
        throw SingularityError("division by a jet with zero value");
    const Complex w = a.v / b.v;
    const Complex w1 = (a.d1 - w * b.d1) / b.v;
    const Complex w2 = (a.d2 - 2.0 * w1 * b.d1 - w * b.d2) / b.v;
    return {w, w1, w2};
}

namespace detail {

/// Chain rule for an elementary function with derivatives F', F'' at a.v.
inline Jet2 jet_chain(const Jet2& a, Complex Fv, Complex dF, Complex ddF) {
    return {Fv, dF * a.d1, dF * a.d2 + ddF * a.d1 * a.d1};
}

} // namespace detail

inline Jet2 jet_exp(const Jet2& a) {
    const Complex e = std::exp(a.v);
    return detail::jet_chain(a, e, e, e);
}

/// Principal branch, cut along the negative real axis.
inline Jet2 jet_log(const Jet2& a) {
    if (abs2(a.v) == 0.0)
        throw SingularityError("log of a jet with zero value");
    const Complex inv = 1.0 / a.v;
    return detail::jet_chain(a, std::log(a.v), inv, -inv * inv);
}

inline Jet2 jet_sin(const Jet2& a) {
    const Complex s = std::sin(a.v), c = std::cos(a.v);
    return detail::jet_chain(a, s, c, -s);
}

inline Jet2 jet_cos(const Jet2& a) {
    const Complex s = std::sin(a.v), c = std::cos(a.v);
    return detail::jet_chain(a, c, -s, -c);
}

/// Integer power by repeated multiplication; exact and branch-free.
inline Jet2 jet_pow_int(const Jet2& a, long n) {
    if (n == 0) return Jet2::constant(1.0);
    if (n < 0) {
        if (abs2(a.v) == 0.0)
            throw SingularityError("negative power of a jet with zero value");
        return jet_div(Jet2::constant(1.0), jet_pow_int(a, -n));
    }
    Jet2 acc = Jet2::constant(1.0);
    Jet2 base = a;
    for (long k = n; k > 0; k >>= 1) {
        if (k & 1) acc = jet_mul(acc, base);
        if (k > 1) base = jet_mul(base, base);
    }
    return acc;
}

/// General power a^b = exp(b * log a), principal branch.
inline Jet2 jet_pow(const Jet2& a, const Jet2& b) {
    return jet_exp(jet_mul(b, jet_log(a)));
}

} // namespace ssforge
