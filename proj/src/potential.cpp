#include "worldline/potential.hpp"

#include <cmath>
#include <utility>

namespace worldline {

Potential Potential::free() { return Potential{}; }

Potential Potential::linear(double alpha) {
    Potential p;
    p.kind_ = PotentialKind::Linear;
    p.label_ = "linear";
    p.strength_ = alpha;
    return p;
}

Potential Potential::quartic(double kappa) {
    Potential p;
    p.kind_ = PotentialKind::Quartic;
    p.label_ = "quartic";
    p.strength_ = kappa;
    return p;
}

Potential Potential::custom(std::string label, Fn v, Fn dv, Fn d2v) {
    Potential p;
    p.kind_ = PotentialKind::Custom;
    p.label_ = std::move(label);
    p.v_ = std::move(v);
    p.dv_ = std::move(dv);
    p.d2v_ = std::move(d2v);
    return p;
}

double Potential::v(double x) const {
    switch (kind_) {
        case PotentialKind::Free: return 0.0;
        case PotentialKind::Linear: return scale_ * strength_ * x;
        case PotentialKind::Quartic: return scale_ * strength_ * x * x * x * x;
        case PotentialKind::Custom: return scale_ * v_(x);
    }
    return 0.0;
}

double Potential::dv(double x) const {
    switch (kind_) {
        case PotentialKind::Free: return 0.0;
        case PotentialKind::Linear: return scale_ * strength_;
        case PotentialKind::Quartic: return scale_ * 4.0 * strength_ * x * x * x;
        case PotentialKind::Custom: return scale_ * dv_(x);
    }
    return 0.0;
}

double Potential::d2v(double x) const {
    switch (kind_) {
        case PotentialKind::Free: return 0.0;
        case PotentialKind::Linear: return 0.0;
        case PotentialKind::Quartic: return scale_ * 12.0 * strength_ * x * x;
        case PotentialKind::Custom:
            if (d2v_) return scale_ * d2v_(x);
            {
                const double step = 1e-5 * std::max(1.0, std::abs(x));
                return scale_ * (dv_(x + step) - dv_(x - step)) / (2.0 * step);
            }
    }
    return 0.0;
}

Potential Potential::scaled(double s) const {
    Potential p = *this;
    p.scale_ = scale_ * s;
    return p;
}

}  // namespace worldline
