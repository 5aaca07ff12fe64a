#include "branchwalk/polynomial.hpp"

#include <algorithm>

namespace branchwalk {

Rational Polynomial::eval(const Rational& t) const {
    Rational acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double Polynomial::eval(double t) const {
    double acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + to_double(*it);
    return acc;
}

Polynomial Polynomial::antiderivative() const {
    Polynomial out;
    out.coeffs.resize(coeffs.size() + 1);
    for (size_t i = 0; i < coeffs.size(); ++i)
        out.coeffs[i + 1] = coeffs[i] / Rational(static_cast<int>(i) + 1);
    out.trim();
    return out;
}

void Polynomial::trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (other.coeffs.size() > coeffs.size()) coeffs.resize(other.coeffs.size());
    for (size_t i = 0; i < other.coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        coeffs.clear();
        return *this;
    }
    for (auto& a : coeffs) a *= c;
    return *this;
}

std::string Polynomial::to_string() const {
    if (coeffs.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs[i];
        if (c == 0) continue;
        Rational mag = c < 0 ? Rational(-c) : c;
        if (!out.empty())
            out += c < 0 ? " - " : " + ";
        else if (c < 0)
            out += "-";
        bool unit = mag == 1;
        if (i == 0) {
            out += rational_to_string(mag);
        } else {
            if (!unit) out += rational_to_string(mag) + "*";
            out += i == 1 ? "t" : "t^" + std::to_string(i);
        }
    }
    return out;
}

const Polynomial& PiecewisePolynomial::piece_at(const Rational& t) const {
    size_t i = std::upper_bound(breakpoints.begin(), breakpoints.end(), t) - breakpoints.begin();
    return pieces[i];
}

Rational PiecewisePolynomial::eval(const Rational& t) const { return piece_at(t).eval(t); }

double PiecewisePolynomial::eval(double t) const {
    size_t i = 0;
    while (i < breakpoints.size() && t >= to_double(breakpoints[i])) ++i;
    return pieces[i].eval(t);
}

PiecewisePolynomial PiecewisePolynomial::integrate_from(const Rational& a) const {
    PiecewisePolynomial out;
    out.breakpoints = {a};
    out.pieces = {Polynomial::zero()};

    // accumulate piece antiderivatives left to right starting at a
    size_t i = std::upper_bound(breakpoints.begin(), breakpoints.end(), a) - breakpoints.begin();
    Rational lower = a;
    Rational acc(0);  // integral value accumulated at `lower`
    for (;; ++i) {
        Polynomial anti = pieces[i].antiderivative();
        // piece on [lower, next): value acc + anti(t) - anti(lower)
        Polynomial shifted = anti;
        shifted += Polynomial(acc - anti.eval(lower));
        out.pieces.push_back(shifted);
        if (i >= breakpoints.size()) break;
        const Rational& next = breakpoints[i];
        acc += anti.eval(next) - anti.eval(lower);
        lower = next;
        out.breakpoints.push_back(next);
    }
    out.simplify();
    return out;
}

PiecewisePolynomial& PiecewisePolynomial::operator*=(const Rational& c) {
    for (auto& p : pieces) p *= c;
    simplify();
    return *this;
}

PiecewisePolynomial& PiecewisePolynomial::operator+=(const PiecewisePolynomial& other) {
    std::vector<Rational> merged;
    merged.reserve(breakpoints.size() + other.breakpoints.size());
    std::merge(breakpoints.begin(), breakpoints.end(), other.breakpoints.begin(),
               other.breakpoints.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    std::vector<Polynomial> out_pieces;
    out_pieces.reserve(merged.size() + 1);
    auto piece_on = [](const PiecewisePolynomial& f, const Rational& probe) -> const Polynomial& {
        return f.piece_at(probe);
    };
    // probe each interval by its left endpoint (or below the first breakpoint)
    for (size_t i = 0; i <= merged.size(); ++i) {
        Rational probe = i == 0 ? (merged.empty() ? Rational(0) : merged.front() - 1) : merged[i - 1];
        Polynomial sum = piece_on(*this, probe);
        sum += piece_on(other, probe);
        out_pieces.push_back(std::move(sum));
    }
    breakpoints = std::move(merged);
    pieces = std::move(out_pieces);
    simplify();
    return *this;
}

void PiecewisePolynomial::simplify() {
    size_t i = 0;
    while (i < breakpoints.size()) {
        if (pieces[i] == pieces[i + 1]) {
            breakpoints.erase(breakpoints.begin() + i);
            pieces.erase(pieces.begin() + i);
        } else {
            ++i;
        }
    }
}

bool PiecewisePolynomial::is_continuous() const {
    for (size_t i = 0; i < breakpoints.size(); ++i)
        if (pieces[i].eval(breakpoints[i]) != pieces[i + 1].eval(breakpoints[i])) return false;
    return true;
}

}  // namespace branchwalk
