#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace slicefourier {

using Complex = std::complex<double>;
using Frequency = std::vector<int>;

// Finite sum of exponentials e_nu(x) = exp(2 pi i nu.x) on [0,1)^dim.
class TrigPoly {
public:
    explicit TrigPoly(int dim = 1);

    static TrigPoly exponential(const Frequency& nu, Complex coeff = 1.0);
    static TrigPoly constant(int dim, Complex value = 1.0);

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }
    const std::map<Frequency, Complex>& terms() const { return terms_; }

    // Adds to the coefficient of e_nu; exact zeros are kept out of the support.
    void add(const Frequency& nu, Complex coeff);
    Complex coefficient(const Frequency& nu) const;

    Complex operator()(std::span<const double> x) const;

    TrigPoly& operator+=(const TrigPoly& other);
    TrigPoly& operator*=(Complex s);
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b);
    friend TrigPoly operator*(Complex s, TrigPoly p) { return p *= s; }

    // Multiplies by e_shift.
    TrigPoly shifted(const Frequency& shift) const;
    // New coordinate c is old coordinate order[c].
    TrigPoly permuted(std::span<const int> order) const;

    double l1_norm() const;
    // Componentwise min / max of the frequency support (zeros for the empty poly).
    Frequency min_frequency() const;
    Frequency max_frequency() const;

private:
    int dim_;
    std::map<Frequency, Complex> terms_;
};

}  // namespace slicefourier
