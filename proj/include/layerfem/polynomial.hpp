#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace layerfem {

/// Dense polynomial in monomial form, c0 + c1 x + c2 x^2 + ...
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {}
    explicit Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

    static Polynomial constant(double value) { return Polynomial{value}; }

    /// Value of the derivative of the given order at x.
    [[nodiscard]] double operator()(double x, int derivative = 0) const
    {
        const auto j = static_cast<std::size_t>(derivative);
        double acc = 0.0;
        for (std::size_t n = coeffs_.size(); n-- > j;) {
            double term = coeffs_[n];
            for (std::size_t m = 0; m < j; ++m) {
                term *= static_cast<double>(n - m);
            }
            acc = acc * x + term;
        }
        return acc;
    }

    [[nodiscard]] const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] bool is_constant() const noexcept
    {
        for (std::size_t n = 1; n < coeffs_.size(); ++n) {
            if (coeffs_[n] != 0.0) {
                return false;
            }
        }
        return true;
    }

private:
    std::vector<double> coeffs_;
};

}  // namespace layerfem
