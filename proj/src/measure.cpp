#include "slicefourier/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slicefourier/error.hpp"

namespace slicefourier {

namespace {

constexpr double kWeightSumTol = 1e-12;

void check_weight_sum(double sum, const char* what) {
    if (std::abs(sum - 1.0) > kWeightSumTol)
        fail(ErrorCode::InvalidArgument,
             std::string(what) + " weights must sum to 1 (got " + std::to_string(sum) + ")");
}

}  // namespace

DigitIFS::DigitIFS(int base, std::vector<DigitVector> digits, std::vector<double> weights)
    : base_(base), dim_(0) {
    if (base < 2) fail(ErrorCode::InvalidArgument, "digit IFS base must be >= 2");
    if (digits.empty()) fail(ErrorCode::InvalidArgument, "digit IFS needs at least one digit");
    if (digits.size() != weights.size())
        fail(ErrorCode::InvalidArgument, "digit IFS digits and weights differ in length");
    dim_ = static_cast<int>(digits.front().size());
    if (dim_ < 1) fail(ErrorCode::InvalidArgument, "digit IFS dimension must be >= 1");
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const auto& d = digits[i];
        if (static_cast<int>(d.size()) != dim_)
            fail(ErrorCode::InvalidArgument, "digit vectors have inconsistent dimension");
        for (int v : d)
            if (v < 0 || v >= base)
                fail(ErrorCode::InvalidArgument, "digit outside {0..base-1}");
        if (!(weights[i] > 0.0)) fail(ErrorCode::InvalidArgument, "digit weights must be > 0");
        auto it = std::find(digits_.begin(), digits_.end(), d);
        if (it == digits_.end()) {
            digits_.push_back(d);
            weights_.push_back(weights[i]);
        } else {
            weights_[it - digits_.begin()] += weights[i];
        }
    }
    check_weight_sum(std::accumulate(weights_.begin(), weights_.end(), 0.0), "digit IFS");
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : dim_(0) {
    if (atoms.empty()) fail(ErrorCode::InvalidArgument, "atomic measure needs at least one atom");
    dim_ = static_cast<int>(atoms.front().point.size());
    if (dim_ < 1) fail(ErrorCode::InvalidArgument, "atomic measure dimension must be >= 1");
    double sum = 0.0;
    for (auto& a : atoms) {
        if (static_cast<int>(a.point.size()) != dim_)
            fail(ErrorCode::InvalidArgument, "atoms have inconsistent dimension");
        for (double x : a.point)
            if (!(x >= 0.0 && x < 1.0))
                fail(ErrorCode::InvalidArgument, "atom coordinate outside [0,1)");
        if (!(a.weight > 0.0)) fail(ErrorCode::InvalidArgument, "atom weights must be > 0");
        sum += a.weight;
        auto it = std::find_if(atoms_.begin(), atoms_.end(),
                               [&](const Atom& b) { return b.point == a.point; });
        if (it == atoms_.end())
            atoms_.push_back(std::move(a));
        else
            it->weight += a.weight;
    }
    check_weight_sum(sum, "atomic measure");
}

ProductMeasure::ProductMeasure(std::vector<FactorMeasure> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) fail(ErrorCode::InvalidArgument, "product measure needs a factor");
    for (const auto& f : factors_)
        if (dimension(f) != 1)
            fail(ErrorCode::InvalidArgument, "product factors must be one-dimensional");
}

int dimension(const FactorMeasure& m) {
    return std::visit([](const auto& x) { return x.dim(); }, m);
}

int dimension(const Measure& m) {
    return std::visit([](const auto& x) { return x.dim(); }, m);
}

Measure to_measure(const FactorMeasure& f) {
    return std::visit([](const auto& x) -> Measure { return x; }, f);
}

namespace {

void check_keep(std::span<const int> keep, int dim) {
    if (keep.empty()) fail(ErrorCode::InvalidArgument, "marginal needs at least one coordinate");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= dim)
            fail(ErrorCode::InvalidArgument, "marginal coordinate out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            fail(ErrorCode::InvalidArgument, "marginal coordinates must be strictly increasing");
    }
}

Measure marginal_of(const DigitIFS& m, std::span<const int> keep) {
    std::vector<DigitVector> digits;
    for (const auto& d : m.digits()) {
        DigitVector p;
        for (int c : keep) p.push_back(d[c]);
        digits.push_back(std::move(p));
    }
    return DigitIFS(m.base(), std::move(digits), m.weights());
}

Measure marginal_of(const AtomicMeasure& m, std::span<const int> keep) {
    std::vector<Atom> atoms;
    for (const auto& a : m.atoms()) {
        Atom p{{}, a.weight};
        for (int c : keep) p.point.push_back(a.point[c]);
        atoms.push_back(std::move(p));
    }
    return AtomicMeasure(std::move(atoms));
}

Measure marginal_of(const ProductMeasure& m, std::span<const int> keep) {
    if (keep.size() == 1) return to_measure(m.factors()[keep[0]]);
    std::vector<FactorMeasure> f;
    for (int c : keep) f.push_back(m.factors()[c]);
    return ProductMeasure(std::move(f));
}

}  // namespace

Measure marginal(const Measure& m, std::span<const int> keep) {
    check_keep(keep, dimension(m));
    return std::visit([&](const auto& x) { return marginal_of(x, keep); }, m);
}

Measure coordinate_marginal(const Measure& m, int c) {
    const int keep[1] = {c};
    return marginal(m, keep);
}

Measure permuted(const Measure& m, std::span<const int> order) {
    const int d = dimension(m);
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < d; ++i)
        if (static_cast<int>(sorted.size()) != d || sorted[i] != i)
            fail(ErrorCode::InvalidArgument, "not a permutation of the coordinates");
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) {
        std::vector<DigitVector> digits;
        for (const auto& dv : ifs->digits()) {
            DigitVector p(d);
            for (int j = 0; j < d; ++j) p[j] = dv[order[j]];
            digits.push_back(std::move(p));
        }
        return DigitIFS(ifs->base(), std::move(digits), ifs->weights());
    }
    if (const auto* at = std::get_if<AtomicMeasure>(&m)) {
        std::vector<Atom> atoms;
        for (const auto& a : at->atoms()) {
            Atom p{std::vector<double>(d), a.weight};
            for (int j = 0; j < d; ++j) p.point[j] = a.point[order[j]];
            atoms.push_back(std::move(p));
        }
        return AtomicMeasure(std::move(atoms));
    }
    const auto& prod = std::get<ProductMeasure>(m);
    std::vector<FactorMeasure> f;
    for (int j = 0; j < d; ++j) f.push_back(prod.factors()[order[j]]);
    return ProductMeasure(std::move(f));
}

DigitIFS lebesgue_ifs(int base, int dim) {
    std::vector<DigitVector> digits;
    std::size_t count = 1;
    for (int j = 0; j < dim; ++j) count *= base;
    for (std::size_t i = 0; i < count; ++i) {
        DigitVector d(dim);
        std::size_t r = i;
        for (int j = dim - 1; j >= 0; --j) {
            d[j] = static_cast<int>(r % base);
            r /= base;
        }
        digits.push_back(std::move(d));
    }
    return DigitIFS(base, std::move(digits), std::vector<double>(count, 1.0 / count));
}

}  // namespace slicefourier
