#include "rspider/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rspider/errors.hpp"

namespace rspider::oracle {
namespace {

Matrix curve(const ManifoldPoint& x, const Matrix& v, double t) {
  const Matrix& u = x.coords();
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann: {
      // (U + tV)(I + t^2 V^T V)^(-1/2)
      const Matrix m = Matrix::Identity(u.cols(), u.cols()) +
                       t * t * (v.transpose() * v);
      Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
      const Matrix inv_sqrt = eig.eigenvectors() *
                              eig.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                              eig.eigenvectors().transpose();
      return (u + t * v) * inv_sqrt;
    }
    case ManifoldType::kSphere: {
      const Matrix y = u + t * v;
      return y / y.norm();
    }
    case ManifoldType::kEuclidean:
      return u + t * v;
  }
  return u;
}

double loss_at(const Problem& problem, const Matrix& coords,
               const ManifoldKind& kind, std::optional<std::size_t> component) {
  const ManifoldPoint p = make_point_unchecked(kind, coords);
  if (component) return problem.component_loss(*component, p);
  double total = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    total += problem.component_loss(i, p);
  }
  return total / static_cast<double>(problem.size());
}

}  // namespace

double fd_directional(const Problem& problem, const ManifoldPoint& x,
                      const TangentVector& v, const FdConfig& cfg,
                      std::optional<std::size_t> component) {
  if (!(cfg.step > 0.0)) throw ContractError("fd_directional: step must be > 0");
  if (std::abs(v.coords().norm() - 1.0) > 1e-8) {
    throw ContractError("fd_directional: direction must have unit norm");
  }
  const double t = cfg.step;
  const ManifoldKind& kind = x.kind();
  const double plus = loss_at(problem, curve(x, v.coords(), t), kind, component);
  const double minus = loss_at(problem, curve(x, v.coords(), -t), kind, component);
  return (plus - minus) / (2.0 * t);
}

GradientCheck gradient_check(const Problem& problem, const ManifoldPoint& x,
                             Rng& rng, const FdConfig& cfg,
                             std::optional<std::size_t> component) {
  const Matrix g = component ? problem.component_grad(*component, x).coords()
                             : problem.full_grad(x).coords();
  GradientCheck out;
  for (std::size_t j = 0; j < cfg.directions; ++j) {
    const TangentVector v = random_tangent(x, rng, 1.0);
    const double analytic = (g.array() * v.coords().array()).sum();
    const double fd = fd_directional(problem, x, v, cfg, component);
    const double err = std::abs(fd - analytic) / std::max(1.0, std::abs(analytic));
    out.relative_errors.push_back(err);
    out.max_relative_error = std::max(out.max_relative_error, err);
  }
  return out;
}

Matrix project(const ManifoldPoint& x, const Matrix& ambient) {
  const Matrix& u = x.coords();
  switch (x.kind().type()) {
    case ManifoldType::kGrassmann:
      return ambient - u * (u.transpose() * ambient);
    case ManifoldType::kSphere:
      return ambient - u * u.col(0).dot(ambient.col(0));
    case ManifoldType::kEuclidean:
      return ambient;
  }
  return ambient;
}

Matrix full_gradient(const Problem& problem, const ManifoldPoint& x,
                     IfoCounter* ifo) {
  Matrix sum = Matrix::Zero(x.coords().rows(), x.coords().cols());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    sum += project(x, problem.component_egrad(i, x));
  }
  if (ifo) ifo->charge(problem.size());
  return sum / static_cast<double>(problem.size());
}

Matrix transport(const ManifoldPoint& x, const ManifoldPoint& z,
                 const Matrix& v) {
  const Matrix& a = x.coords();
  const Matrix& b = z.coords();
  switch (x.kind().type()) {
    case ManifoldType::kEuclidean:
      return v;
    case ManifoldType::kSphere: {
      const Vector p = a.col(0);
      const Vector q = b.col(0);
      const double c = std::clamp(p.dot(q), -1.0, 1.0);
      const double theta = std::acos(c);
      if (theta < 1e-15) return v;
      const Vector dir = (q - c * p) / std::sin(theta);  // unit, tangent at p
      const Vector w = v.col(0);
      const double along = dir.dot(w);
      // The component along the geodesic rotates; the rest is unchanged.
      const Vector moved = w - along * dir +
                           along * (-std::sin(theta) * p + std::cos(theta) * dir);
      return moved;
    }
    case ManifoldType::kGrassmann: {
      const Eigen::Index k = a.cols();
      const Matrix atb = a.transpose() * b;
      const Matrix m = (b - a * atb) * atb.inverse();
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Matrix& u = svd.matrixU();
      const Matrix& w = svd.matrixV();
      Vector theta(k), s(k), c(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        theta(i) = std::atan(svd.singularValues()(i));
        s(i) = std::sin(theta(i));
        c(i) = std::cos(theta(i));
      }
      const Matrix end = a * w * c.asDiagonal() * w.transpose() +
                         u * s.asDiagonal() * w.transpose();
      const Matrix moved = (-a * w * s.asDiagonal() * u.transpose() +
                            u * c.asDiagonal() * u.transpose() +
                            Matrix::Identity(a.rows(), a.rows()) -
                            u * u.transpose()) *
                           v;
      // end = b R with R orthogonal; express the result in b's frame.
      const Matrix r = b.transpose() * end;
      const Matrix out = moved * r.transpose();
      return out - b * (b.transpose() * out);
    }
  }
  return v;
}

Matrix exhaustive_expectation(const Problem& problem, const ManifoldPoint& x_prev,
                              const ManifoldPoint& x_cur, const Matrix& v_prev) {
  const std::size_t n = problem.size();
  if (n > 64) throw ContractError("exhaustive_expectation: n must be <= 64");
  Matrix sum = Matrix::Zero(x_cur.coords().rows(), x_cur.coords().cols());
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix g_cur = project(x_cur, problem.component_egrad(i, x_cur));
    const Matrix g_prev = project(x_prev, problem.component_egrad(i, x_prev));
    sum += g_cur - transport(x_prev, x_cur, g_prev - v_prev);
  }
  return sum / static_cast<double>(n);
}

double kpca_optimum_svd(const Matrix& samples, int k) {
  Eigen::JacobiSVD<Matrix> svd(samples);
  const Vector& sv = svd.singularValues();
  double total = 0.0;
  for (int j = 0; j < k && j < sv.size(); ++j) total += sv(j) * sv(j);
  return -total / static_cast<double>(samples.rows());
}

}  // namespace rspider::oracle
