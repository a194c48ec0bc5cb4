#pragma once

// Numerical tolerances shared by the geometry, problems and tests. All are
// chosen for IEEE double precision.
namespace rspider::tol {

// Manifold membership: ||U^T U - I||_F for Grassmann frames.
inline constexpr double kGrassmannMembership = 1e-10;
// Manifold membership: | ||x|| - 1 | for the sphere.
inline constexpr double kSphereMembership = 1e-12;
// Horizontal-space condition ||U^T D||_F (Grassmann) / |x^T v| (sphere).
inline constexpr double kGrassmannTangent = 1e-10;
inline constexpr double kSphereTangent = 1e-12;

// exp/retract re-orthonormalize their output once drift exceeds this.
inline constexpr double kReorthonormalizeDrift = 1e-12;

// Smallest singular value of U^T Z (Grassmann) below which the pair is
// treated as lying on the cut locus (some principal angle equals pi/2).
inline constexpr double kCutLocusSingularValue = 1e-10;
// Sphere: pairs with 1 + <x, z> below this are treated as antipodal.
inline constexpr double kAntipodalGap = 1e-12;

// Isometry and roundtrip targets asserted by the geometry suite.
inline constexpr double kTransportIsometry = 1e-10;
inline constexpr double kExpLogRoundtrip = 1e-8;
inline constexpr double kTransportRoundtrip = 1e-9;

// Tikhonov term added to rank-deficient least-squares normal equations.
inline constexpr double kLeastSquaresRidge = 1e-12;
// Relative pivot below which a normal-equation system counts as rank deficient.
inline constexpr double kRankDeficientPivot = 1e-13;

// Central-difference defaults for gradient checks.
inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelativeError = 1e-5;

}  // namespace rspider::tol
