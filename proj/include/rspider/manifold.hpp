#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>

namespace rspider {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Rng = std::mt19937_64;

enum class ManifoldType { kGrassmann, kSphere, kEuclidean };

enum class TransportMode { kExactGeodesic, kProjectionVectorTransport };

/// Which manifold a point lives on, with its dimensions.
///
/// Grassmann(d, k) points are d x k matrices with orthonormal columns; tangent
/// vectors are kept horizontal (U^T D = 0), so every quantity the library
/// computes depends only on the spanned subspace. Sphere(d) and Euclidean(d)
/// points are d x 1 column vectors.
class ManifoldKind {
 public:
  static ManifoldKind Grassmann(int d, int k);
  static ManifoldKind Sphere(int d);
  static ManifoldKind Euclidean(int d);

  ManifoldType type() const { return type_; }
  int ambient_dim() const { return d_; }
  int subspace_dim() const { return k_; }
  Eigen::Index rows() const { return d_; }
  Eigen::Index cols() const { return k_; }
  std::string to_string() const;

  bool operator==(const ManifoldKind&) const = default;

 private:
  ManifoldKind(ManifoldType type, int d, int k) : type_(type), d_(d), k_(k) {}

  ManifoldType type_;
  int d_;
  int k_;
};

/// A point on a manifold. Construction validates shape and membership.
class ManifoldPoint {
 public:
  ManifoldPoint(ManifoldKind kind, Matrix coords);

  /// Orthonormalizes (Grassmann, QR with positive diagonal) or normalizes
  /// (sphere) an arbitrary ambient matrix of the right shape.
  static ManifoldPoint from_ambient(ManifoldKind kind, const Matrix& ambient);

  const ManifoldKind& kind() const { return kind_; }
  const Matrix& coords() const { return coords_; }

  bool operator==(const ManifoldPoint& other) const {
    return kind_ == other.kind_ && coords_ == other.coords_;
  }

 private:
  struct Unchecked {};
  ManifoldPoint(ManifoldKind kind, Matrix coords, Unchecked)
      : kind_(kind), coords_(std::move(coords)) {}

  ManifoldKind kind_;
  Matrix coords_;

  friend ManifoldPoint make_point_unchecked(ManifoldKind, Matrix);
};

/// A tangent vector in ambient coordinates, tied to its base point.
class TangentVector {
 public:
  /// Validates shape and the tangent-space condition at `base`.
  TangentVector(ManifoldPoint base, Matrix coords);

  static TangentVector zero(const ManifoldPoint& base);

  const ManifoldPoint& base() const { return base_; }
  const Matrix& coords() const { return coords_; }

  TangentVector& operator+=(const TangentVector& other);
  TangentVector& operator-=(const TangentVector& other);
  TangentVector& operator*=(double scale);

 private:
  struct Unchecked {};
  TangentVector(ManifoldPoint base, Matrix coords, Unchecked)
      : base_(std::move(base)), coords_(std::move(coords)) {}

  ManifoldPoint base_;
  Matrix coords_;

  friend TangentVector make_tangent_unchecked(ManifoldPoint, Matrix);
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a, const TangentVector& b);
TangentVector operator*(double scale, TangentVector v);
TangentVector operator-(TangentVector v);

// Internal constructors used where the invariants hold by construction.
ManifoldPoint make_point_unchecked(ManifoldKind kind, Matrix coords);
TangentVector make_tangent_unchecked(ManifoldPoint base, Matrix coords);

/// ||U^T U - I||_F (Grassmann), | ||x|| - 1 | (sphere), 0 (Euclidean).
double membership_error(const ManifoldKind& kind, const Matrix& coords);
/// ||U^T D||_F (Grassmann), |x^T v| (sphere), 0 (Euclidean).
double tangent_error(const ManifoldPoint& base, const Matrix& coords);

/// Orthogonal projection of an ambient matrix onto T_x M. For Grassmann this
/// is (I - U U^T) g.
TangentVector project_tangent(const ManifoldPoint& x, const Matrix& ambient);

/// Exponential map. Grassmann uses the thin-SVD closed form of the geodesic.
ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v);

/// Inverse exponential map. Throws CutLocusError when the minimizing geodesic
/// is not unique (a principal angle of pi/2, or antipodal sphere points).
TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& z);

/// Moves `v` from T_x M to T_z M. kExactGeodesic is parallel transport along
/// the minimizing geodesic and is an isometry; kProjectionVectorTransport
/// projects the ambient coordinates onto T_z M.
TangentVector transport(const ManifoldPoint& x, const ManifoldPoint& z,
                        const TangentVector& v,
                        TransportMode mode = TransportMode::kExactGeodesic);

/// Transport from x to z with the geodesic factors computed once; apply() is
/// then a few small matrix products per vector.
class Transporter {
 public:
  Transporter(const ManifoldPoint& x, const ManifoldPoint& z,
              TransportMode mode = TransportMode::kExactGeodesic);

  TangentVector apply(const TangentVector& v) const;
  const ManifoldPoint& source() const { return source_; }
  const ManifoldPoint& target() const { return target_; }

 private:
  ManifoldPoint source_;
  ManifoldPoint target_;
  TransportMode mode_;
  bool identity_ = false;
  // Grassmann: moved = (v + head * (left^T v)) * frame_change.
  // Sphere: moved = v + (unit^T v) * head.
  Matrix left_;
  Matrix head_;
  Matrix frame_change_;
};

double inner(const TangentVector& u, const TangentVector& v);
double norm(const TangentVector& v);

/// Geodesic distance; equals norm(log_map(x, z)).
double distance(const ManifoldPoint& x, const ManifoldPoint& z);

/// First-order approximation of exp_map: QR for Grassmann, normalize(x + v)
/// for the sphere, x + v for Euclidean space.
ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v);

/// True when both points represent the same element of the manifold. For
/// Grassmann this compares spanned subspaces, ||X X^T - Z Z^T||_F <= tol.
bool same_point(const ManifoldPoint& x, const ManifoldPoint& z, double tol);

ManifoldPoint random_point(const ManifoldKind& kind, Rng& rng);
/// Gaussian ambient matrix projected to T_x M and scaled to `length`.
TangentVector random_tangent(const ManifoldPoint& x, Rng& rng, double length);

}  // namespace rspider
