#pragma once

#include <string>
#include <vector>

#include "branchwalk/rational.hpp"

namespace branchwalk {

// Dense polynomial with exact rational coefficients, coeffs[i] * t^i.
struct Polynomial {
    std::vector<Rational> coeffs;

    Polynomial() = default;
    explicit Polynomial(Rational constant) : coeffs{std::move(constant)} { trim(); }
    explicit Polynomial(std::vector<Rational> c) : coeffs(std::move(c)) { trim(); }

    static Polynomial zero() { return Polynomial(); }
    static Polynomial one() { return Polynomial(Rational(1)); }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Rational eval(const Rational& t) const;
    double eval(double t) const;

    // Antiderivative with zero constant term.
    Polynomial antiderivative() const;

    void trim();

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs == b.coeffs; }

    std::string to_string() const;  // e.g. "1/2*t^2 - t - 3/2"
};

// Piecewise polynomial on the whole real line: pieces[0] on (-inf, b[0]),
// pieces[i] on [b[i-1], b[i]), pieces[k] on [b[k-1], +inf). Breakpoints are
// strictly increasing; pieces.size() == breakpoints.size() + 1.
struct PiecewisePolynomial {
    std::vector<Rational> breakpoints;
    std::vector<Polynomial> pieces;

    PiecewisePolynomial() : pieces{Polynomial::zero()} {}
    static PiecewisePolynomial constant(Rational c) {
        PiecewisePolynomial f;
        f.pieces = {Polynomial(std::move(c))};
        return f;
    }

    bool is_constant() const { return breakpoints.empty(); }

    const Polynomial& piece_at(const Rational& t) const;
    Rational eval(const Rational& t) const;
    double eval(double t) const;

    // F(t) = integral of this from a to max(t, a); zero for t <= a.
    PiecewisePolynomial integrate_from(const Rational& a) const;

    PiecewisePolynomial& operator*=(const Rational& c);
    PiecewisePolynomial& operator+=(const PiecewisePolynomial& other);
    friend PiecewisePolynomial operator*(PiecewisePolynomial f, const Rational& c) { return f *= c; }
    friend PiecewisePolynomial operator+(PiecewisePolynomial a, const PiecewisePolynomial& b) {
        return a += b;
    }
    friend bool operator==(const PiecewisePolynomial& a, const PiecewisePolynomial& b) {
        return a.breakpoints == b.breakpoints && a.pieces == b.pieces;
    }

    // Drops breakpoints whose adjacent pieces are identical.
    void simplify();

    // True if f(t-) == f(t+) at every breakpoint.
    bool is_continuous() const;
};

}  // namespace branchwalk
