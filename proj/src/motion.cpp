#include "tomo/motion.hpp"

#include <cmath>

namespace tomo {

void MotionBasis::validate(const AcquisitionGeometry& geo) const {
    for (std::size_t m = 0; m < terms.size(); ++m) {
        if (const auto* tab = std::get_if<TabulatedMotion>(&terms[m])) {
            if (tab->values.size() != geo.times.size() ||
                tab->times.size() != geo.times.size())
                throw ConfigError("motion basis: tabulated term " + std::to_string(m) +
                                  " must have exactly one value per acquisition");
            for (std::size_t n = 0; n < geo.times.size(); ++n)
                if (tab->times[n] != geo.times[n])
                    throw ConfigError("motion basis: tabulated term " + std::to_string(m) +
                                      " abscissae do not match acquisition times");
        } else if (const auto* sin_term = std::get_if<SinusoidalMotion>(&terms[m])) {
            if (!(sin_term->period_years > 0.0))
                throw ConfigError("motion basis: sinusoidal period must be positive");
        }
    }
}

double eval_motion_basis(const MotionBasis& basis, int term_index, double t) {
    if (term_index < 0 || term_index >= basis.num_terms())
        throw ConfigError("eval_motion_basis: term index " + std::to_string(term_index) +
                          " out of range (M=" + std::to_string(basis.num_terms()) + ")");
    const MotionTerm& term = basis.terms[static_cast<std::size_t>(term_index)];
    if (std::holds_alternative<LinearMotion>(term)) {
        return t;
    }
    if (const auto* s = std::get_if<SinusoidalMotion>(&term)) {
        return std::sin(2.0 * M_PI * (t - s->phase_offset_years) / s->period_years);
    }
    const auto& tab = std::get<TabulatedMotion>(term);
    for (std::size_t n = 0; n < tab.times.size(); ++n)
        if (tab.times[n] == t) return tab.values[n];
    throw ConfigError("eval_motion_basis: tabulated lookup for t not among the stored times");
}

}  // namespace tomo
