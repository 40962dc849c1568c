#pragma once

#include <array>

#include <Eigen/Dense>

#include "hullmeter/bloch_basis.hpp"
#include "hullmeter/hull_measure.hpp"
#include "hullmeter/product_overlap.hpp"
#include "hullmeter/quantum_states.hpp"

namespace hullmeter {

// Closed forms for cos(theta)|00> + sin(theta)|11> on the branch
// sin(2 theta) >= 0. Other angles throw ValidationError.

// 1 / (1 + 2 sin 2theta)
double ghz_alpha(double theta);

// Witness with correlation block diag(1, -1, 1): l.r = vx ux - vy uy + vz uz.
WitnessDirection ghz_witness(const BasisPtr& basis = build_basis({2, 2}));

// The six product vectors in 4x4 table form (row 0 = second party's Bloch
// vector, column 0 = first party's), with the (0, 0) slot set to 1.
std::array<Eigen::Matrix4d, 6> ghz_certificate_tables();

// R = sin2t/2 (R1 + R2 + R3 + R4) + cos^2 t R5 + sin^2 t R6, each R_k a
// product vector. Construction re-derives the Bloch factors of every table
// and throws if one is not a product vector.
DecompositionCertificate ghz_certificate(double theta, const BasisPtr& basis = build_basis({2, 2}));

}  // namespace hullmeter
