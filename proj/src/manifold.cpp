#include "rspider/manifold.hpp"

#include <cmath>
#include <sstream>

#include "rspider/errors.hpp"
#include "rspider/tolerances.hpp"

namespace rspider {
namespace {

// Thin SVD with a reproducible sign convention: singular values descending
// (Eigen's order) and the first non-negligible entry of every left singular
// vector made nonnegative.
struct ThinSvd {
  Matrix left;
  Vector sigma;
  Matrix right;
};

ThinSvd thin_svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  for (Eigen::Index j = 0; j < out.left.cols(); ++j) {
    const double scale = out.left.col(j).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < out.left.rows(); ++i) {
      const double entry = out.left(i, j);
      if (std::abs(entry) > 1e-12 * scale) {
        if (entry < 0.0) {
          out.left.col(j) *= -1.0;
          out.right.col(j) *= -1.0;
        }
        break;
      }
    }
  }
  return out;
}

// Q factor of a thin QR decomposition with a positive diagonal in R, so that
// a matrix that is already orthonormal is returned (numerically) unchanged.
Matrix orthonormal_q_factor(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (packed(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

// Orthogonal polar factor of a square matrix.
Matrix polar_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void require_same_kind(const ManifoldKind& a, const ManifoldKind& b,
                       const char* op) {
  if (!(a == b)) {
    throw ContractError(std::string(op) + ": points on different manifolds (" +
                        a.to_string() + " vs " + b.to_string() + ")");
  }
}

void require_base(const ManifoldPoint& x, const TangentVector& v,
                  const char* op) {
  if (!(v.base() == x)) {
    throw ContractError(std::string(op) +
                        ": tangent vector is not based at the given point");
  }
}

void require_shape(const ManifoldKind& kind, const Matrix& m, const char* op) {
  if (m.rows() != kind.rows() || m.cols() != kind.cols()) {
    std::ostringstream msg;
    msg << op << ": expected " << kind.rows() << "x" << kind.cols()
        << " matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(msg.str());
  }
}

Matrix maybe_reorthonormalize(const ManifoldKind& kind, Matrix coords) {
  if (membership_error(kind, coords) <= tol::kReorthonormalizeDrift) {
    return coords;
  }
  switch (kind.type()) {
    case ManifoldType::kGrassmann:
      return orthonormal_q_factor(coords);
    case ManifoldType::kSphere:
      return coords / coords.norm();
    case ManifoldType::kEuclidean:
      break;
  }
  return coords;
}

// Horizontal projection (I - U U^T) g for an orthonormal frame U.
Matrix horizontal(const Matrix& frame, const Matrix& g) {
  return g - frame * (frame.transpose() * g);
}

TangentVector grassmann_log(const ManifoldPoint& x, const ManifoldPoint& z) {
  const Matrix& u = x.coords();
  const Matrix& y = z.coords();
  const Matrix cross = u.transpose() * y;
  Eigen::JacobiSVD<Matrix> cross_svd(cross);
  if (cross_svd.singularValues().minCoeff() < tol::kCutLocusSingularValue) {
    throw CutLocusError(
        "log_map: principal angle at pi/2, geodesic is not unique");
  }
  // T = (I - U U^T) Z (U^T Z)^{-1}; solve with the transpose system.
  const Matrix orth = y - u * cross;
  const Matrix t =
      cross.transpose().partialPivLu().solve(orth.transpose()).transpose();
  const ThinSvd svd = thin_svd(t);
  Vector angles = svd.sigma.array().atan().matrix();
  Matrix out = svd.left * angles.asDiagonal() * svd.right.transpose();
  return make_tangent_unchecked(x, horizontal(u, out));
}

TangentVector sphere_log(const ManifoldPoint& x, const ManifoldPoint& z) {
  const Vector xv = x.coords().col(0);
  const Vector zv = z.coords().col(0);
  const double c = xv.dot(zv);
  Vector w = zv - c * xv;
  const double s = w.norm();
  if (1.0 + c < tol::kAntipodalGap) {
    throw CutLocusError("log_map: antipodal points on the sphere");
  }
  if (s == 0.0) return TangentVector::zero(x);
  const double theta = std::atan2(s, c);
  Vector out = (theta / s) * w;
  out -= xv * xv.dot(out);
  return make_tangent_unchecked(x, Matrix(out));
}

}  // namespace

ManifoldKind ManifoldKind::Grassmann(int d, int k) {
  if (k < 1 || k >= d) {
    throw ContractError("Grassmann(d, k) requires 1 <= k < d");
  }
  return ManifoldKind(ManifoldType::kGrassmann, d, k);
}

ManifoldKind ManifoldKind::Sphere(int d) {
  if (d < 2) throw ContractError("Sphere(d) requires d >= 2");
  return ManifoldKind(ManifoldType::kSphere, d, 1);
}

ManifoldKind ManifoldKind::Euclidean(int d) {
  if (d < 1) throw ContractError("Euclidean(d) requires d >= 1");
  return ManifoldKind(ManifoldType::kEuclidean, d, 1);
}

std::string ManifoldKind::to_string() const {
  std::ostringstream out;
  switch (type_) {
    case ManifoldType::kGrassmann:
      out << "Grassmann(" << d_ << "," << k_ << ")";
      break;
    case ManifoldType::kSphere:
      out << "Sphere(" << d_ << ")";
      break;
    case ManifoldType::kEuclidean:
      out << "Euclidean(" << d_ << ")";
      break;
  }
  return out.str();
}

double membership_error(const ManifoldKind& kind, const Matrix& coords) {
  switch (kind.type()) {
    case ManifoldType::kGrassmann:
      return (coords.transpose() * coords -
              Matrix::Identity(coords.cols(), coords.cols()))
          .norm();
    case ManifoldType::kSphere:
      return std::abs(coords.norm() - 1.0);
    case ManifoldType::kEuclidean:
      return 0.0;
  }
  return 0.0;
}

double tangent_error(const ManifoldPoint& base, const Matrix& coords) {
  switch (base.kind().type()) {
    case ManifoldType::kGrassmann:
      return (base.coords().transpose() * coords).norm();
    case ManifoldType::kSphere:
      return std::abs(base.coords().col(0).dot(coords.col(0)));
    case ManifoldType::kEuclidean:
      return 0.0;
  }
  return 0.0;
}

ManifoldPoint::ManifoldPoint(ManifoldKind kind, Matrix coords)
    : kind_(kind), coords_(std::move(coords)) {
  require_shape(kind_, coords_, "ManifoldPoint");
  if (!coords_.allFinite()) {
    throw ContractError("ManifoldPoint: non-finite coordinates");
  }
  const double err = membership_error(kind_, coords_);
  const double limit = kind_.type() == ManifoldType::kSphere
                           ? tol::kSphereMembership
                           : tol::kGrassmannMembership;
  if (err > limit) {
    throw ContractError("ManifoldPoint: coordinates are not on " +
                        kind_.to_string());
  }
}

ManifoldPoint ManifoldPoint::from_ambient(ManifoldKind kind,
                                          const Matrix& ambient) {
  require_shape(kind, ambient, "ManifoldPoint::from_ambient");
  switch (kind.type()) {
    case ManifoldType::kGrassmann:
      return ManifoldPoint(kind, orthonormal_q_factor(ambient));
    case ManifoldType::kSphere:
      return ManifoldPoint(kind, ambient / ambient.norm());
    case ManifoldType::kEuclidean:
      return ManifoldPoint(kind, ambient);
  }
  return ManifoldPoint(kind, ambient);
}

ManifoldPoint make_point_unchecked(ManifoldKind kind, Matrix coords) {
  return ManifoldPoint(kind, std::move(coords), ManifoldPoint::Unchecked{});
}

TangentVector::TangentVector(ManifoldPoint base, Matrix coords)
    : base_(std::move(base)), coords_(std::move(coords)) {
  require_shape(base_.kind(), coords_, "TangentVector");
  const double limit = base_.kind().type() == ManifoldType::kSphere
                           ? tol::kSphereTangent
                           : tol::kGrassmannTangent;
  if (tangent_error(base_, coords_) > limit * std::max(1.0, coords_.norm())) {
    throw ContractError("TangentVector: coordinates are not tangent at base");
  }
}

TangentVector TangentVector::zero(const ManifoldPoint& base) {
  return make_tangent_unchecked(
      base, Matrix::Zero(base.coords().rows(), base.coords().cols()));
}

TangentVector make_tangent_unchecked(ManifoldPoint base, Matrix coords) {
  return TangentVector(std::move(base), std::move(coords),
                       TangentVector::Unchecked{});
}

TangentVector& TangentVector::operator+=(const TangentVector& other) {
  require_base(base_, other, "TangentVector::operator+=");
  coords_ += other.coords_;
  return *this;
}

TangentVector& TangentVector::operator-=(const TangentVector& other) {
  require_base(base_, other, "TangentVector::operator-=");
  coords_ -= other.coords_;
  return *this;
}

TangentVector& TangentVector::operator*=(double scale) {
  coords_ *= scale;
  return *this;
}

TangentVector operator+(TangentVector a, const TangentVector& b) {
  a += b;
  return a;
}

TangentVector operator-(TangentVector a, const TangentVector& b) {
  a -= b;
  return a;
}

TangentVector operator*(double scale, TangentVector v) {
  v *= scale;
  return v;
}

TangentVector operator-(TangentVector v) {
  v *= -1.0;
  return v;
}

TangentVector project_tangent(const ManifoldPoint& x, const Matrix& ambient) {
  require_shape(x.kind(), ambient, "project_tangent");
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann:
      return make_tangent_unchecked(x, horizontal(x.coords(), ambient));
    case ManifoldType::kSphere: {
      const Vector xv = x.coords().col(0);
      Vector out = ambient.col(0) - xv * xv.dot(ambient.col(0));
      return make_tangent_unchecked(x, Matrix(out));
    }
    case ManifoldType::kEuclidean:
      return make_tangent_unchecked(x, ambient);
  }
  return make_tangent_unchecked(x, ambient);
}

ManifoldPoint exp_map(const ManifoldPoint& x, const TangentVector& v) {
  require_base(x, v, "exp_map");
  const Matrix& dir = v.coords();
  if (dir.isZero(0.0)) return x;
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann: {
      const ThinSvd svd = thin_svd(dir);
      const Vector cosines = svd.sigma.array().cos().matrix();
      const Vector sines = svd.sigma.array().sin().matrix();
      Matrix out = x.coords() * svd.right * cosines.asDiagonal() *
                       svd.right.transpose() +
                   svd.left * sines.asDiagonal() * svd.right.transpose();
      return make_point_unchecked(x.kind(),
                                  maybe_reorthonormalize(x.kind(), out));
    }
    case ManifoldType::kSphere: {
      const double theta = dir.norm();
      Matrix out = std::cos(theta) * x.coords() + (std::sin(theta) / theta) * dir;
      return make_point_unchecked(x.kind(),
                                  maybe_reorthonormalize(x.kind(), out));
    }
    case ManifoldType::kEuclidean:
      return make_point_unchecked(x.kind(), x.coords() + dir);
  }
  return x;
}

TangentVector log_map(const ManifoldPoint& x, const ManifoldPoint& z) {
  require_same_kind(x.kind(), z.kind(), "log_map");
  if (x.coords() == z.coords()) return TangentVector::zero(x);
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann:
      return grassmann_log(x, z);
    case ManifoldType::kSphere:
      return sphere_log(x, z);
    case ManifoldType::kEuclidean:
      return make_tangent_unchecked(x, z.coords() - x.coords());
  }
  return TangentVector::zero(x);
}

Transporter::Transporter(const ManifoldPoint& x, const ManifoldPoint& z,
                         TransportMode mode)
    : source_(x), target_(z), mode_(mode) {
  require_same_kind(x.kind(), z.kind(), "transport");
  const ManifoldType type = x.kind().type();
  if (x.coords() == z.coords() || type == ManifoldType::kEuclidean) {
    identity_ = true;
    return;
  }
  if (mode == TransportMode::kProjectionVectorTransport) return;

  TangentVector direction = TangentVector::zero(x);
  try {
    direction = log_map(x, z);
  } catch (const CutLocusError& e) {
    throw TransportError(std::string("transport: target not reachable: ") +
                         e.what());
  }

  if (type == ManifoldType::kSphere) {
    const double theta = direction.coords().norm();
    if (theta > 0.0) {
      left_ = direction.coords() / theta;
      head_ = (std::cos(theta) - 1.0) * left_ - std::sin(theta) * x.coords();
    }
    return;
  }

  // Grassmann: parallel transport along Y(t) = U Q cos(S t) Q^T + P sin(S t) Q^T
  // of a horizontal vector xi is xi + (-U Q sin(S) + P (cos(S) - I)) P^T xi,
  // expressed in the endpoint frame Y(1). The result is re-expressed in z's
  // own frame by the orthogonal factor of Y(1)^T Z.
  const Matrix& u = x.coords();
  const ThinSvd svd = thin_svd(direction.coords());
  const Vector cosines = svd.sigma.array().cos().matrix();
  const Vector sines = svd.sigma.array().sin().matrix();
  const Matrix endpoint =
      u * svd.right * cosines.asDiagonal() * svd.right.transpose() +
      svd.left * sines.asDiagonal() * svd.right.transpose();
  const Vector cos_minus_one = (cosines.array() - 1.0).matrix();
  left_ = svd.left;
  head_ = -(u * svd.right) * sines.asDiagonal() +
          svd.left * cos_minus_one.asDiagonal();
  frame_change_ = polar_factor(endpoint.transpose() * z.coords());
}

TangentVector Transporter::apply(const TangentVector& v) const {
  require_base(source_, v, "transport");
  if (identity_) return make_tangent_unchecked(target_, v.coords());
  if (mode_ == TransportMode::kProjectionVectorTransport) {
    return project_tangent(target_, v.coords());
  }
  if (source_.kind().type() == ManifoldType::kSphere) {
    Vector out = v.coords().col(0);
    if (left_.size() > 0) out += left_.col(0).dot(out) * head_.col(0);
    const Vector zv = target_.coords().col(0);
    out -= zv * zv.dot(out);
    return make_tangent_unchecked(target_, Matrix(out));
  }
  Matrix moved = v.coords() + head_ * (left_.transpose() * v.coords());
  moved = moved * frame_change_;
  return make_tangent_unchecked(target_, horizontal(target_.coords(), moved));
}

TangentVector transport(const ManifoldPoint& x, const ManifoldPoint& z,
                        const TangentVector& v, TransportMode mode) {
  require_base(x, v, "transport");
  return Transporter(x, z, mode).apply(v);
}

double inner(const TangentVector& u, const TangentVector& v) {
  require_base(u.base(), v, "inner");
  return u.coords().cwiseProduct(v.coords()).sum();
}

double norm(const TangentVector& v) { return v.coords().norm(); }

double distance(const ManifoldPoint& x, const ManifoldPoint& z) {
  return norm(log_map(x, z));
}

ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v) {
  require_base(x, v, "retract");
  if (v.coords().isZero(0.0)) return x;
  const Matrix moved = x.coords() + v.coords();
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann:
      return make_point_unchecked(x.kind(), orthonormal_q_factor(moved));
    case ManifoldType::kSphere:
      return make_point_unchecked(x.kind(), moved / moved.norm());
    case ManifoldType::kEuclidean:
      return make_point_unchecked(x.kind(), moved);
  }
  return x;
}

bool same_point(const ManifoldPoint& x, const ManifoldPoint& z, double tol) {
  if (!(x.kind() == z.kind())) return false;
  if (x.kind().type() == ManifoldType::kGrassmann) {
    // ||X X^T - Z Z^T||_F = sqrt(2) ||(I - X X^T) Z||_F for equal-rank frames.
    return std::sqrt(2.0) * horizontal(x.coords(), z.coords()).norm() <= tol;
  }
  return (x.coords() - z.coords()).norm() <= tol;
}

ManifoldPoint random_point(const ManifoldKind& kind, Rng& rng) {
  std::normal_distribution<double> gauss;
  Matrix ambient(kind.rows(), kind.cols());
  for (Eigen::Index j = 0; j < ambient.cols(); ++j) {
    for (Eigen::Index i = 0; i < ambient.rows(); ++i) ambient(i, j) = gauss(rng);
  }
  return ManifoldPoint::from_ambient(kind, ambient);
}

TangentVector random_tangent(const ManifoldPoint& x, Rng& rng, double length) {
  std::normal_distribution<double> gauss;
  Matrix ambient(x.coords().rows(), x.coords().cols());
  for (Eigen::Index j = 0; j < ambient.cols(); ++j) {
    for (Eigen::Index i = 0; i < ambient.rows(); ++i) ambient(i, j) = gauss(rng);
  }
  TangentVector v = project_tangent(x, ambient);
  const double n = norm(v);
  if (n == 0.0) return v;
  v *= length / n;
  return v;
}

}  // namespace rspider
