#pragma once

#include <functional>
#include <string>

namespace worldline {

enum class PotentialKind { Free, Linear, Quartic, Custom };

/// Time-independent potential V(x) with its first two derivatives.
///
/// Built-ins are Free (V = 0), Linear (V = alpha x) and Quartic (V = kappa x^4).
/// A custom potential may omit the second derivative; it is then taken from a
/// central difference of the first derivative.
class Potential {
public:
    using Fn = std::function<double(double)>;

    static Potential free();
    static Potential linear(double alpha);
    static Potential quartic(double kappa);
    static Potential custom(std::string label, Fn v, Fn dv, Fn d2v = {});

    double v(double x) const;
    double dv(double x) const;
    double d2v(double x) const;

    PotentialKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    /// alpha for Linear, kappa for Quartic, 0 otherwise.
    double strength() const noexcept { return strength_; }
    bool is_free() const noexcept { return kind_ == PotentialKind::Free || scale_ == 0.0; }
    double scale() const noexcept { return scale_; }

    /// Copy with V multiplied by s; used for homotopy in the potential strength.
    Potential scaled(double s) const;

private:
    PotentialKind kind_ = PotentialKind::Free;
    std::string label_ = "free";
    double strength_ = 0.0;
    double scale_ = 1.0;
    Fn v_, dv_, d2v_;
};

}  // namespace worldline
