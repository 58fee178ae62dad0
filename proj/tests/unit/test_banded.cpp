#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "rpspline/banded.hpp"
#include "rpspline/basis.hpp"
#include "rpspline/error.hpp"
#include "rpspline/fitter.hpp"
#include "rpspline/penalty.hpp"

using namespace rpspline;

namespace {

Eigen::MatrixXd dense(const BandedSPD& m) {
  const int d = static_cast<int>(m.dim());
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m(i, j);
  return out;
}

BandedSPD random_spd(std::mt19937_64& rng, std::size_t dim, std::size_t bw) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedSPD m(dim, bw);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i >= bw ? i - bw : 0; j < i; ++j) m.at(i, j) = u(rng);
  }
  // diagonal dominance
  for (std::size_t i = 0; i < dim; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      if (j != i) s += std::abs(m(i, j));
    m.at(i, i) = s + 0.1 + std::abs(u(rng));
  }
  return m;
}

Eigen::MatrixXd dense_basis(const DesignMatrix& b) {
  const auto v = b.to_dense();
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), static_cast<long>(b.rows()), static_cast<long>(b.cols()));
}

}  // namespace

TEST_CASE("identity") {
  BandedSPD id(5, 2);
  for (std::size_t i = 0; i < 5; ++i) id.at(i, i) = 1.0;
  const BandCholesky f = band_cholesky(id);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(f.lower(i, j) == (i == j ? 1.0 : 0.0));
  const std::vector<double> e1{1, 0, 0, 0, 0};
  CHECK(band_solve(f, e1) == e1);
  const std::vector<double> zero(5, 0.0);
  CHECK(band_solve(f, zero) == zero);
}

TEST_CASE("discrete Laplacian round trip") {
  BandedSPD lap(5, 1);
  for (std::size_t i = 0; i < 5; ++i) {
    lap.at(i, i) = 2.0;
    if (i > 0) lap.at(i, i - 1) = -1.0;
  }
  const BandCholesky f = band_cholesky(lap);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j <= i; ++j) l(i, j) = f.lower(i, j);
  CHECK((l * l.transpose() - dense(lap)).cwiseAbs().maxCoeff() <= 1e-12);
  const Eigen::MatrixXd ref = Eigen::LLT<Eigen::MatrixXd>(dense(lap)).matrixL();
  CHECK((l - ref).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("singular matrix reports the failing pivot") {
  BandedSPD m(4, 1);
  // [1 1; 1 1] block has a zero eigenvalue
  m.at(0, 0) = 1.0;
  m.at(1, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(2, 2) = 1.0;
  m.at(3, 3) = 1.0;
  try {
    band_cholesky(m);
    FAIL("expected a factorization error");
  } catch (const FactorizationError& e) {
    CHECK(e.kind() == ErrorKind::Factorization);
    CHECK(e.pivot() == 1u);
  }
}

TEST_CASE("random banded SPD solves match dense solves") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> dimd(1, 60);
  std::uniform_int_distribution<std::size_t> bwd(0, 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int c = 0; c < 100; ++c) {
    const std::size_t dim = dimd(rng);
    const BandedSPD m = random_spd(rng, dim, bwd(rng));
    std::vector<double> rhs(dim);
    for (double& r : rhs) r = u(rng);
    const auto x = band_solve(band_cholesky(m), rhs);
    const Eigen::VectorXd ref =
        dense(m).ldlt().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), dim));
    const double err = (Eigen::Map<const Eigen::VectorXd>(x.data(), dim) - ref).norm();
    CHECK(err <= 1e-8 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("weighted gram, cross product and smoother trace match dense algebra") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z;
  for (int c = 0; c < 20; ++c) {
    const int n = 30 + c * 5;
    std::vector<double> xs(n), ys(n), w(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = u(rng);
      ys[i] = z(rng);
      w[i] = 0.05 + u(rng);
    }
    const KnotVector k = make_knots(xs, 4, 10);
    const DesignMatrix b = design_matrix(k, xs);
    const PenaltyMatrix pen = penalty_matrix(k, 2);
    const double lambda = std::pow(10.0, -6.0 + 4.0 * u(rng));
    const BandedSPD m = normal_matrix(b, pen, w, 1.3, lambda);
    const Eigen::MatrixXd bd = dense_basis(b);
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), n), yv(ys.data(), n);
    const Eigen::MatrixXd btwb = bd.transpose() * wv.asDiagonal() * bd;
    CHECK((dense(weighted_gram(b, w)) - btwb).cwiseAbs().maxCoeff() <= 1e-12 * btwb.norm());
    const auto cross = weighted_cross(b, w, ys);
    const Eigen::VectorXd cref = bd.transpose() * wv.asDiagonal() * yv;
    CHECK((Eigen::Map<const Eigen::VectorXd>(cross.data(), cref.size()) - cref).norm() <=
          1e-12 * std::max(1.0, cref.norm()));
    const Eigen::MatrixXd md = dense(m);
    const double ref = md.ldlt().solve(btwb).trace();
    const double tr = smoother_trace(b, w, band_cholesky(m));
    CHECK(std::abs(tr - ref) <= 1e-8 * ref);
    CHECK(tr >= 2.0 - 1e-8);
    CHECK(tr <= k.dim() + 1e-8);
  }
}

TEST_CASE("smoother trace limits") {
  std::vector<double> xs(200);
  for (int i = 0; i < 200; ++i) xs[i] = (i + 0.5) / 200.0;
  const KnotVector k = make_knots(xs, 4, 20);
  const DesignMatrix b = design_matrix(k, xs);
  const PenaltyMatrix pen = penalty_matrix(k, 2);
  const std::vector<double> w(200, 1.0);
  const double unit = penalty_unit(b, pen, 1.0);
  const double big = smoother_trace(b, w, band_cholesky(normal_matrix(b, pen, w, 1.0, 1e12 * unit)));
  CHECK(std::abs(big - 2.0) <= 0.01);
  const double zero = smoother_trace(b, w, band_cholesky(normal_matrix(b, pen, w, 1.0, 0.0)));
  CHECK(zero == doctest::Approx(k.dim()).epsilon(1e-6));
}
