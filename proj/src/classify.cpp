#include "slicefourier/classify.hpp"

#include <cmath>
#include <map>

namespace slicefourier {

const char* to_string(Verdict v) { return v == Verdict::Lebesgue ? "lebesgue" : "singular"; }

ClassificationReport classify(const DigitIFS& m) {
    ClassificationReport rep;
    rep.base = m.base();
    rep.overall = true;
    for (int c = 0; c < m.dim(); ++c) {
        // compensated sums, so equal weights merge to the correctly rounded total
        std::map<int, std::pair<double, double>> merged;
        for (std::size_t i = 0; i < m.size(); ++i) {
            auto& [sum, comp] = merged[m.digits()[i][c]];
            const double w = m.weights()[i], t = sum + w;
            comp += std::abs(sum) >= std::abs(w) ? (sum - t) + w : (w - t) + sum;
            sum = t;
        }
        CoordinateRecord rec;
        rec.coordinate = c;
        for (const auto& [digit, sc] : merged) rec.reduced.emplace_back(digit, sc.first + sc.second);
        rec.lebesgue_weight = 1.0 / m.base();
        rec.full = static_cast<int>(merged.size()) == m.base();
        double gap = 0.0;
        for (const auto& [digit, w] : rec.reduced) gap = std::max(gap, std::abs(w - rec.lebesgue_weight));
        if (rec.full && gap <= kLebesgueWeightTol) {
            rec.verdict = Verdict::Lebesgue;
        } else if (rec.full && gap <= 1e-9) {
            rec.warning = "merged weights within 1e-9 of uniform; treated as singular";
        }
        if (rec.verdict != Verdict::Singular) rep.overall = false;
        rep.coordinates.push_back(std::move(rec));
    }
    return rep;
}

bool slice_singularity_gate(const Measure& m) {
    if (std::holds_alternative<AtomicMeasure>(m)) return true;
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) return classify(*ifs).overall;
    for (const auto& f : std::get<ProductMeasure>(m).factors()) {
        if (const auto* ifs = std::get_if<DigitIFS>(&f))
            if (!classify(*ifs).overall) return false;
    }
    return true;
}

}  // namespace slicefourier
