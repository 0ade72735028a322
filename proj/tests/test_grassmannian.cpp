#include <gtest/gtest.h>

#include "grassorth/grassmannian.hpp"
#include "grassorth/random.hpp"
#include "grassorth/subspaces.hpp"

using namespace grassorth;
using Q = GaussRational;
using C = Complex;

TEST(Grassmannian, PointFromMatrix) {
  const auto base = point_from_matrix(Matrix<Q>::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}));
  EXPECT_EQ(base.r(), 2u);
  EXPECT_EQ(base.s(), 2u);
  EXPECT_EQ(base.subspace(), span<Q>({{1, 0, 0, 0}, {0, 1, 0, 0}}, 4, 0.0));
  try {
    point_from_matrix(Matrix<Q>::from_rows({{1, 0, 1, 0}, {2, 0, 2, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
  EXPECT_EQ(point_from_matrix(Matrix<Q>::from_rows({{0, 1, 0, 1}, {1, 0, 1, 0}})).rep(),
            Matrix<Q>::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}}));
}

TEST(Grassmannian, ChartPoint) {
  EXPECT_EQ(chart_point(Matrix<Q>(2, 3)).rep(), Matrix<Q>::from_rows({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}));
  EXPECT_EQ(chart_point(Matrix<Q>::from_rows({{1, 0}})).rep(), Matrix<Q>::from_rows({{1, 1, 0}}));
  EXPECT_EQ(chart_point(Matrix<Q>::identity(2)).rep(), Matrix<Q>::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}}));
}

TEST(Grassmannian, ToChart) {
  EXPECT_EQ(to_chart(chart_point(Matrix<Q>(2, 2))), Matrix<Q>(2, 2));
  try {
    to_chart(point_from_matrix(Matrix<Q>::from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInChart);
  }
  EXPECT_EQ(to_chart(point_from_matrix(Matrix<Q>::from_rows({{2, 0, 4, 0}, {0, 1, 0, 3}}))),
            Matrix<Q>::from_rows({{2, 0}, {0, 3}}));
  const auto zf = to_chart(point_from_matrix(Matrix<C>::from_rows({{2, 0, 4, 0}, {0, 1, 0, 3}})));
  EXPECT_LT(max_abs_diff(zf, Matrix<C>::from_rows({{2, 0}, {0, 3}})), 1e-14);
}

TEST(Grassmannian, PairingAndOrthogonality) {
  const auto p = point_from_matrix(Matrix<Q>::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}));
  const auto q = point_from_matrix(Matrix<Q>::from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}}));
  EXPECT_EQ(pairing(p, q), Matrix<Q>(2, 2));
  EXPECT_TRUE(is_orthogonal(p, q));
  const auto o = chart_point(Matrix<Q>(2, 2));
  EXPECT_EQ(pairing(o, o), Matrix<Q>::identity(2));
  EXPECT_FALSE(is_orthogonal(o, o));
  const auto a = point_from_matrix(Matrix<Q>::from_rows({{1, 1, 0}}));
  const auto b = point_from_matrix(Matrix<Q>::from_rows({{1, 1, 1}}));
  EXPECT_EQ(pairing(a, b), Matrix<Q>::from_rows({{0}}));
  EXPECT_TRUE(is_orthogonal(chart_point(Matrix<Q>::from_rows({{1, 0}})), chart_point(Matrix<Q>::from_rows({{1, 1}}))));
  EXPECT_THROW(pairing(p, a), Error);
}

TEST(Grassmannian, ClassifyPoint) {
  EXPECT_EQ(classify_point(chart_point(Matrix<Q>::identity(2))), PointKind::Null);
  EXPECT_EQ(classify_point(chart_point(Matrix<Q>(2, 3))), PointKind::Positive);
  EXPECT_EQ(classify_point(point_from_matrix(Matrix<Q>::from_rows({{1, 0, 0}, {0, 0, 1}}))), PointKind::Indefinite);
  // rank-deficient pairing with a nonzero part
  EXPECT_EQ(classify_point(point_from_matrix(Matrix<Q>::from_rows({{1, 0, 1, 0}, {0, 1, 0, 0}}))),
            PointKind::Degenerate);
}

TEST(Grassmannian, DomainAndShilov) {
  EXPECT_TRUE(in_domain(Matrix<C>(1, 2)));
  EXPECT_FALSE(in_shilov(Matrix<C>(1, 2)));
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(in_shilov(Matrix<C>::from_rows({{h, h}})));
  EXPECT_FALSE(in_domain(Matrix<C>::from_rows({{h, h}})));
  Matrix<Q> z(2, 3);
  z(0, 0) = 1;
  z(1, 1) = 1;
  EXPECT_TRUE(in_shilov(z));
  EXPECT_FALSE(in_domain(Matrix<Q>::from_rows({{2, 0}})));
}

TEST(Grassmannian, SampleShilov) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const auto z = sample_shilov(2, 4, seed);
    EXPECT_TRUE(in_shilov(z, 1e-10));
    EXPECT_TRUE(is_maximal_null(chart_point(z).subspace(kDefaultTol), Signature(2, 4), 1e-9));
    EXPECT_EQ(classify_point(chart_point(z)), PointKind::Null);
    const auto u = sample_shilov(3, 3, seed);
    EXPECT_NEAR(std::abs(determinant(u)), 1.0, 1e-10);
  }
  EXPECT_EQ(sample_shilov(2, 3, 7), sample_shilov(2, 3, 7));
  EXPECT_FALSE(sample_shilov(2, 3, 7) == sample_shilov(2, 3, 8));
  EXPECT_THROW(sample_shilov(3, 2, 1), Error);
}

TEST(Grassmannian, OrthogonalPartner) {
  const auto w = sample_orthogonal_partner(Matrix<Q>::from_rows({{1, 0}}), 5);
  EXPECT_EQ(w(0, 0), Q(1));
  try {
    sample_orthogonal_partner(Matrix<C>(1, 3), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const auto z = sample_open_point<C>(1, 3, seed);
    const auto wz = sample_orthogonal_partner(z, seed + 1000);
    EXPECT_TRUE(is_orthogonal(chart_point(z), chart_point(wz), 1e-10));
    const auto ze = sample_open_point<Q>(1, 3, seed);
    EXPECT_TRUE(is_orthogonal(chart_point(ze), chart_point(sample_orthogonal_partner(ze, seed))));
  }
}

TEST(GrassmannianProperties, PairingVersusComplementContainment) {
  Rng rng(31);
  size_t orthogonal_cases = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const size_t r = 1 + trial % 2;
    const size_t s = 2 + trial % 3;
    const Signature sig(r, s);
    const auto p = point_from_matrix(random_matrix<Q>(r, r + s, rng));
    GrassPoint<Q> q;
    if (trial % 2 == 0) {
      // q drawn inside V_p^⊥ when it is large enough
      const auto perp = orth_complement(p.subspace(), sig, 0.0);
      const Matrix<Q> coeffs = random_matrix<Q>(r, perp.dim(), rng);
      q = point_from_matrix(coeffs * perp.basis());
    } else {
      q = point_from_matrix(random_matrix<Q>(r, r + s, rng));
    }
    const bool orth = is_orthogonal(p, q);
    orthogonal_cases += orth ? 1 : 0;
    EXPECT_EQ(orth, orth_complement(q.subspace(), sig, 0.0).contains(p.subspace(), 0.0));
  }
  EXPECT_GT(orthogonal_cases, 100u);
}

TEST(GrassmannianProperties, RankOneReducesToVectors) {
  Rng rng(8);
  const Signature sig(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = random_matrix<Q>(1, 3, rng);
    const auto w = trial % 2 ? sample_orthogonal_partner(z, trial) : random_matrix<Q>(1, 3, rng);
    Vec<Q> x{1}, y{1};
    for (size_t k = 0; k < 3; ++k) {
      x.push_back(z(0, k));
      y.push_back(w(0, k));
    }
    EXPECT_EQ(is_orthogonal(chart_point(z), chart_point(w)), inner_product(x, y, sig).is_zero());
  }
}

TEST(GrassmannianProperties, ClassificationIsRepresentativeIndependent) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t r = 1 + trial % 3;
    const size_t s = r + trial % 2;
    Matrix<Q> a = random_matrix<Q>(r, r + s, rng);
    if (trial % 3 == 0) {
      // rational null point: diagonal Pythagorean phases (3 + 4i)/5
      Matrix<Q> z(r, s);
      for (size_t i = 0; i < r; ++i) z(i, i) = Q(mpq_class(3, 5), mpq_class(4, 5));
      a = chart_point(z).rep();
    }
    Matrix<Q> g;
    do {
      g = random_matrix<Q>(r, r, rng);
    } while (determinant(g).is_zero());
    EXPECT_EQ(classify_point(point_from_matrix(a)), classify_point(point_from_matrix(g * a)));
  }
}

TEST(GrassmannianProperties, ShilovIffNull) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const auto z = sample_shilov(1 + seed % 3, 3, seed);
    EXPECT_EQ(classify_point(chart_point(z)), PointKind::Null);
    const auto o = sample_open_point<C>(1 + seed % 3, 3, seed);
    EXPECT_EQ(in_shilov(o), classify_point(chart_point(o)) == PointKind::Null);
  }
}
