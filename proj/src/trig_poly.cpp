#include "slicefourier/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slicefourier/error.hpp"

namespace slicefourier {

TrigPoly::TrigPoly(int dim) : dim_(dim) {
    if (dim < 1) fail(ErrorCode::InvalidArgument, "trig poly dimension must be >= 1");
}

TrigPoly TrigPoly::exponential(const Frequency& nu, Complex coeff) {
    TrigPoly p(static_cast<int>(nu.size()));
    p.add(nu, coeff);
    return p;
}

TrigPoly TrigPoly::constant(int dim, Complex value) {
    return exponential(Frequency(dim, 0), value);
}

void TrigPoly::add(const Frequency& nu, Complex coeff) {
    if (static_cast<int>(nu.size()) != dim_)
        fail(ErrorCode::InvalidArgument, "frequency dimension mismatch");
    auto [it, inserted] = terms_.try_emplace(nu, coeff);
    if (!inserted) it->second += coeff;
    if (it->second == Complex(0.0)) terms_.erase(it);
}

Complex TrigPoly::coefficient(const Frequency& nu) const {
    auto it = terms_.find(nu);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

Complex TrigPoly::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        fail(ErrorCode::InvalidArgument, "evaluation point dimension mismatch");
    Complex sum = 0.0;
    for (const auto& [nu, c] : terms_) {
        double phase = 0.0;
        for (int j = 0; j < dim_; ++j) phase += nu[j] * x[j];
        // reduce before scaling so large frequencies keep their precision
        phase -= std::floor(phase);
        sum += c * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return sum;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& other) {
    if (other.dim_ != dim_) fail(ErrorCode::InvalidArgument, "trig poly dimension mismatch");
    for (const auto& [nu, c] : other.terms_) add(nu, c);
    return *this;
}

TrigPoly& TrigPoly::operator*=(Complex s) {
    if (s == Complex(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [nu, c] : terms_) c *= s;
    return *this;
}

TrigPoly operator-(TrigPoly a, const TrigPoly& b) {
    if (a.dim_ != b.dim_) fail(ErrorCode::InvalidArgument, "trig poly dimension mismatch");
    for (const auto& [nu, c] : b.terms_) a.add(nu, -c);
    return a;
}

TrigPoly TrigPoly::shifted(const Frequency& shift) const {
    if (static_cast<int>(shift.size()) != dim_)
        fail(ErrorCode::InvalidArgument, "shift dimension mismatch");
    TrigPoly out(dim_);
    for (const auto& [nu, c] : terms_) {
        Frequency m = nu;
        for (int j = 0; j < dim_; ++j) m[j] += shift[j];
        out.terms_.emplace(std::move(m), c);
    }
    return out;
}

TrigPoly TrigPoly::permuted(std::span<const int> order) const {
    if (static_cast<int>(order.size()) != dim_)
        fail(ErrorCode::InvalidArgument, "permutation dimension mismatch");
    TrigPoly out(dim_);
    for (const auto& [nu, c] : terms_) {
        Frequency m(dim_);
        for (int j = 0; j < dim_; ++j) m[j] = nu[order[j]];
        out.terms_.emplace(std::move(m), c);
    }
    return out;
}

double TrigPoly::l1_norm() const {
    double s = 0.0;
    for (const auto& [nu, c] : terms_) s += std::abs(c);
    return s;
}

Frequency TrigPoly::min_frequency() const {
    if (terms_.empty()) return Frequency(dim_, 0);
    Frequency lo = terms_.begin()->first;
    for (const auto& [nu, c] : terms_)
        for (int j = 0; j < dim_; ++j) lo[j] = std::min(lo[j], nu[j]);
    return lo;
}

Frequency TrigPoly::max_frequency() const {
    if (terms_.empty()) return Frequency(dim_, 0);
    Frequency hi = terms_.begin()->first;
    for (const auto& [nu, c] : terms_)
        for (int j = 0; j < dim_; ++j) hi[j] = std::max(hi[j], nu[j]);
    return hi;
}

}  // namespace slicefourier
