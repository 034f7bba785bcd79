#include "eembi/ica.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eembi/error.hpp"
#include "eembi/random.hpp"

namespace eembi {

Whitened whiten(const SampleMatrix& x) {
  const Eigen::Index n = x.cols();
  const Eigen::Index rows = x.rows();
  if (n < 1 || rows <= n) throw std::invalid_argument("whiten: need more samples than variables");
  Whitened w;
  w.mean = x.colwise().mean().transpose();
  const SampleMatrix centered = x.rowwise() - w.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(rows - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd values = eig.eigenvalues();
  const double floor = 1e-10 * cov.trace() / static_cast<double>(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (!(values[t] > floor)) {
      values[t] = floor > 0.0 ? floor : 1.0;
      w.regularized = true;
    }
  }
  const Eigen::MatrixXd& u = eig.eigenvectors();
  w.transform = u * values.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  w.data = centered * w.transform;
  return w;
}

bool IcaResult::all_converged() const {
  for (bool c : converged)
    if (!c) return false;
  return true;
}

IcaResult fast_ica(const SampleMatrix& x, int n_components, const IcaOptions& options) {
  if (n_components < 1 || n_components > x.cols())
    throw std::invalid_argument("fast_ica: n_components must be in 1..columns");
  IcaResult result;
  result.whitening = whiten(x);
  const SampleMatrix& z = result.whitening.data;
  const Eigen::Index n = z.cols();
  const double rows = static_cast<double>(z.rows());

  Rng rng(options.seed);
  result.unmixing = Eigen::MatrixXd::Zero(n_components, n);
  Eigen::VectorXd g(z.rows()), dg(z.rows());

  for (int p = 0; p < n_components; ++p) {
    Eigen::VectorXd w(n);
    for (Eigen::Index t = 0; t < n; ++t) w[t] = rng.normal();
    for (int q = 0; q < p; ++q) w -= w.dot(result.unmixing.row(q).transpose()) * result.unmixing.row(q).transpose();
    w.normalize();

    int iter = 0;
    bool converged = false;
    while (iter < options.max_iter) {
      const Eigen::VectorXd u = z * w;
      for (Eigen::Index r = 0; r < u.size(); ++r) {
        if (options.contrast == Contrast::logcosh) {
          const double t = std::tanh(u[r]);
          g[r] = t;
          dg[r] = 1.0 - t * t;
        } else {
          const double e = std::exp(-0.5 * u[r] * u[r]);
          g[r] = u[r] * e;
          dg[r] = (1.0 - u[r] * u[r]) * e;
        }
      }
      const Eigen::VectorXd exg = z.transpose() * g / rows;
      const double beta = u.dot(g) / rows;
      const double edg = dg.sum() / rows;
      Eigen::VectorXd next = w - (exg - beta * w) / (edg - beta);
      for (int q = 0; q < p; ++q)
        next -= next.dot(result.unmixing.row(q).transpose()) * result.unmixing.row(q).transpose();
      const double norm = next.norm();
      if (!std::isfinite(norm) || norm == 0.0)
        throw PipelineError("fast_ica: non-finite update in component " + std::to_string(p));
      next /= norm;
      ++iter;
      const double overlap = std::abs(next.dot(w));
      w = next;
      if (overlap > 1.0 - options.tol) {
        converged = true;
        break;
      }
    }
    result.unmixing.row(p) = w.transpose();
    result.iterations.push_back(iter);
    result.converged.push_back(converged);
  }
  result.sources = z * result.unmixing.transpose();
  return result;
}

}  // namespace eembi
