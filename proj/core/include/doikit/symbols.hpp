#pragma once

#include <cstdint>
#include <string>

#include "doikit/funcspace.hpp"

namespace doikit::symbols {

ScalarField2D identity();       // z
ScalarField2D conjugate();      // z̄
ScalarField2D real_part();      // x
ScalarField2D imag_part();      // y
ScalarField2D abs_squared();    // |z|²
ScalarField2D abs_power(double alpha);  // |z|^α
ScalarField2D capped_abs();     // min(|z|, 1)
ScalarField2D complex_power(int k);     // z^k
ScalarField2D exponential(Frequency nu, Complex coef = 1.0);  // c·e^{iν·z}

/// A piecewise-smooth, discontinuous symbol with no derivative evaluator.
ScalarField2D piecewise_smooth();

/// `terms` distinct frequencies drawn uniformly from the disc of radius
/// `max_frequency`, complex Gaussian coefficients.
TrigPoly2D random_trig_poly(std::uint64_t seed, int terms, double max_frequency);

/// Product symbol x ↦ f(x)·g(x); derivatives by the product rule when both
/// factors have them.
ScalarField2D product(const ScalarField2D& f, const ScalarField2D& g);

}  // namespace doikit::symbols
