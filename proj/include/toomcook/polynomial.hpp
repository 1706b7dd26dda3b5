/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <span>
#include <vector>

#include "toomcook/errors.hpp"
#include "toomcook/rational.hpp"

namespace toomcook {

/// Polynomial over the rationals; coefficient k multiplies a^k.
/// The zero polynomial has no coefficients.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

    /// a - root
    static Polynomial linear(const Rational& root) { return Polynomial({-root, Rational(1)}); }

    [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }
    [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    [[nodiscard]] Rational coefficient(std::size_t k) const {
        return k < coeffs_.size() ? coeffs_[k] : Rational(0);
    }

    [[nodiscard]] Rational evaluate(const Rational& a) const {
        Rational acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * a + *it;
        return acc;
    }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        if (p.is_zero() || q.is_zero())
            return {};
        std::vector<Rational> out(p.coeffs_.size() + q.coeffs_.size() - 1);
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < q.coeffs_.size(); ++j)
                out[i + j] += p.coeffs_[i] * q.coeffs_[j];
        return Polynomial(std::move(out));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

/// Product of a nonempty list of polynomials.
inline Polynomial poly_product(std::span<const Polynomial> factors) {
    if (factors.empty())
        throw ValidationError("poly_product needs at least one factor");
    Polynomial acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i)
        acc = acc * factors[i];
    return acc;
}

} // namespace toomcook
