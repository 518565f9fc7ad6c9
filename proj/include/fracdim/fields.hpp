#pragma once

#include <array>
#include <functional>
#include <type_traits>
#include <utility>

namespace fracdim {

using Point = std::array<double, 3>;

/// Analytic scalar field over a box domain: an opaque callable.
class ScalarField {
public:
    ScalarField() = default;
    template <class F,
              class = std::enable_if_t<
                  !std::is_same_v<std::remove_cv_t<std::remove_reference_t<F>>, ScalarField>>>
    ScalarField(F&& f) : eval_(std::forward<F>(f)) {} // NOLINT(google-explicit-constructor)
    double operator()(const Point& p) const { return eval_(p); }
    double operator()(double x1, double x2, double x3) const { return eval_({x1, x2, x3}); }
    explicit operator bool() const { return static_cast<bool>(eval_); }

private:
    std::function<double(const Point&)> eval_;
};

/// Three scalar components in the orthonormal frame e_k, sharing one domain.
struct VectorField {
    std::array<ScalarField, 3> components;
    const ScalarField& operator[](int k) const { return components[static_cast<std::size_t>(k)]; }
};

} // namespace fracdim
