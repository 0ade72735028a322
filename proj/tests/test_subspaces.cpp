#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "grassorth/random.hpp"
#include "grassorth/subspaces.hpp"
#include "oracles.hpp"

using namespace grassorth;
using Q = GaussRational;
using C = Complex;

namespace {
template <Scalar T>
Subspace<T> sp(std::vector<Vec<T>> rows, size_t n) {
  return span(rows, n, is_exact_v<T> ? 0.0 : kDefaultTol);
}
Vec<Q> e(size_t i, size_t n) {
  Vec<Q> v(n, 0);
  v[i] = 1;
  return v;
}
}  // namespace

TEST(Subspaces, SpanExamples) {
  EXPECT_EQ(sp<Q>({{1, 0}, {2, 0}}, 2).dim(), 1u);
  EXPECT_EQ(sp<Q>({{1, 0}, {2, 0}}, 2).basis(), Matrix<Q>::from_rows({{1, 0}}));
  EXPECT_EQ(sp<Q>({}, 3).dim(), 0u);
  EXPECT_EQ(sp<Q>({{1, 1, 0}, {0, 1, 1}, {1, 0, -1}}, 3).dim(), 2u);
  EXPECT_EQ(sp<C>({{1, 1, 0}, {0, 1, 1}, {1, 0, -1}}, 3).dim(), 2u);
  EXPECT_THROW(sp<Q>({{1, 0}, {1, 0, 0}}, 2), Error);
}

TEST(Subspaces, SumExamples) {
  EXPECT_EQ(sum(sp<Q>({e(0, 2)}, 2), sp<Q>({e(1, 2)}, 2), 0.0).dim(), 2u);
  const auto v = sp<Q>({{1, 2, 3}, {0, 1, 1}}, 3);
  EXPECT_EQ(sum(v, v, 0.0), v);
  EXPECT_EQ(sum(sp<Q>({{1, 1, 0}}, 3), sp<Q>({{1, 0, 1}, {0, 1, -1}}, 3), 0.0).dim(), 2u);
  EXPECT_THROW(sum(sp<Q>({e(0, 2)}, 2), sp<Q>({e(0, 3)}, 3), 0.0), Error);
}

TEST(Subspaces, IntersectExamples) {
  const auto a = sp<Q>({e(0, 3), e(1, 3)}, 3);
  const auto b = sp<Q>({e(1, 3), e(2, 3)}, 3);
  EXPECT_EQ(intersect(a, b, 0.0), sp<Q>({e(1, 3)}, 3));
  EXPECT_EQ(intersect(a, Subspace<Q>::zero(3), 0.0).dim(), 0u);
  EXPECT_EQ(intersect(sp<Q>({{1, 1}, {0, 1}}, 2), sp<Q>({{1, 2}}, 2), 0.0), sp<Q>({{1, 2}}, 2));
  const auto fc = intersect(sp<C>({{1, 1}, {0, 1}}, 2), sp<C>({{1, 2}}, 2), kDefaultTol);
  EXPECT_TRUE(approx_equal(fc, sp<C>({{1, 2}}, 2), 1e-12));
}

TEST(Subspaces, OrthComplementExamples) {
  EXPECT_EQ(orth_complement(sp<Q>({{1, 1}}, 2), Signature(1, 1), 0.0), sp<Q>({{1, 1}}, 2));
  EXPECT_EQ(orth_complement(Subspace<Q>::zero(3), Signature(1, 2), 0.0), Subspace<Q>::full(3));
  EXPECT_EQ(orth_complement(sp<Q>({e(0, 3)}, 3), Signature(1, 2), 0.0), sp<Q>({e(1, 3), e(2, 3)}, 3));
  // Degenerate directions are orthogonal to everything.
  EXPECT_EQ(orth_complement(Subspace<Q>::full(3), Signature(1, 1, 1), 0.0), sp<Q>({e(2, 3)}, 3));
}

TEST(Subspaces, GramExamples) {
  EXPECT_EQ(gram(sp<Q>({e(0, 2), e(1, 2)}, 2), Signature(1, 1)), Matrix<Q>::from_rows({{1, 0}, {0, -1}}));
  EXPECT_EQ(gram(sp<Q>({{1, 1}}, 2), Signature(1, 1)), Matrix<Q>::from_rows({{0}}));
  EXPECT_EQ(gram(sp<Q>({{1, 0, 1}, {0, 1, 0}}, 3), Signature(2, 1)), Matrix<Q>::from_rows({{0, 0}, {0, 1}}));
}

TEST(Subspaces, CongruenceExamples) {
  EXPECT_EQ(inertia(Matrix<Q>::from_rows({{3, 0}, {0, -2}})), (SubSignature{1, 1, 0}));
  EXPECT_EQ(inertia(Matrix<Q>::from_rows({{0, 1}, {1, 0}})), (SubSignature{1, 1, 0}));
  EXPECT_EQ(inertia(Matrix<Q>(3, 3)), (SubSignature{0, 0, 3}));
  EXPECT_EQ(inertia(Matrix<C>::from_rows({{0, 1}, {1, 0}})), (SubSignature{1, 1, 0}));
  const auto h = Matrix<Q>::from_rows({{0, Q(2, 1)}, {Q(2, -1), 0}});
  const auto cd = congruence_diagonalize(h);
  Matrix<Q> d(2, 2);
  for (size_t i = 0; i < 2; ++i) d(i, i) = Q(cd.diagonal[i]);
  EXPECT_EQ(cd.transform * h * cd.transform.adjoint(), d);
  EXPECT_THROW(congruence_diagonalize(Matrix<Q>::from_rows({{1, 2}, {3, 1}})), Error);
  EXPECT_THROW(congruence_diagonalize(Matrix<C>::from_rows({{1, 2}, {3, 1}})), Error);
}

TEST(Subspaces, SignatureExamples) {
  EXPECT_EQ(subspace_signature(sp<Q>({{1, 1}}, 2), Signature(1, 1)), (SubSignature{0, 0, 1}));
  EXPECT_EQ(subspace_signature(sp<Q>({e(0, 2), e(1, 2)}, 2), Signature(1, 1)), (SubSignature{1, 1, 0}));
  EXPECT_EQ(subspace_signature(sp<Q>({{1, 0, 1}, {0, 1, 0}}, 3), Signature(2, 1)), (SubSignature{1, 0, 1}));
}

TEST(Subspaces, MaximalNullExamples) {
  EXPECT_TRUE(is_maximal_null(sp<Q>({{1, 1}}, 2), Signature(1, 1)));
  EXPECT_TRUE(is_maximal_null(sp<Q>({{1, 1, 0}}, 3), Signature(1, 2)));
  EXPECT_FALSE(is_maximal_null(sp<Q>({{1, 1, 0}}, 3), Signature(2, 1)));
  EXPECT_TRUE(is_maximal_null(sp<Q>({{1, 0, 0, 1}, {0, 1, 1, 0}}, 4), Signature(2, 2)));
  EXPECT_THROW(is_maximal_null(sp<Q>({{1, 1, 0}}, 3), Signature(1, 1, 1)), Error);
}

TEST(Subspaces, ContainmentResidual) {
  const auto big = sp<C>({{1, 0, 0}, {0, 1, 0}}, 3);
  EXPECT_LT(big.containment_residual(sp<C>({{1, 1, 0}}, 3)), 1e-14);
  EXPECT_GT(big.containment_residual(sp<C>({{0, 0, 1}}, 3)), 0.5);
  EXPECT_TRUE(big.contains(sp<C>({{2, -1, 0}}, 3), 1e-12));
}

// -- property tests ----------------------------------------------------------

TEST(SubspaceProperties, FloatSignatureMatchesEigenSigns) {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto h = oracle::random_hermitian(rng, 1 + trial % 8, trial % 3 == 0);
    EXPECT_EQ(inertia(h, 1e-8), oracle::eigen_inertia(h, 1e-8)) << "trial " << trial;
  }
}

TEST(SubspaceProperties, SubspaceSignatureMatchesEigenSigns) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 2 + trial % 7;
    const Signature sig(1 + trial % (n - 1), n - 1 - trial % (n - 1));
    const auto v = Subspace<C>::from_rows(random_matrix<C>(1 + trial % n, n, rng), kDefaultTol);
    EXPECT_EQ(subspace_signature(v, sig, 1e-8), oracle::eigen_inertia(gram(v, sig), 1e-8));
  }
}

TEST(SubspaceProperties, ExactCongruenceIsExact) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [h, expected] = oracle::exact_hermitian_with_inertia(rng, 1 + trial % 6);
    const auto cd = congruence_diagonalize(h);
    EXPECT_EQ(cd.inertia, expected);
    Matrix<Q> d(h.rows(), h.rows());
    for (size_t i = 0; i < h.rows(); ++i) d(i, i) = Q(cd.diagonal[i]);
    EXPECT_EQ(cd.transform * h * cd.transform.adjoint(), d);
    EXPECT_FALSE(determinant(cd.transform).is_zero());
  }
}

TEST(SubspaceProperties, DimensionFormulaAndDoubleComplement) {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 2 + trial % 6;
    const size_t ku = trial % (n + 1);
    const size_t kv = (trial / 7) % (n + 1);
    const auto u = Subspace<Q>::from_rows(random_matrix<Q>(ku, n, rng), 0.0);
    // V shares a random part of U so intersections are non-trivial.
    Matrix<Q> vrows = random_matrix<Q>(kv, n, rng);
    if (u.dim() > 0 && kv > 1) {
      for (size_t j = 0; j < n; ++j) vrows(0, j) = u.basis()(0, j);
    }
    const auto v = Subspace<Q>::from_rows(vrows, 0.0);
    EXPECT_EQ(sum(u, v, 0.0).dim() + intersect(u, v, 0.0).dim(), u.dim() + v.dim());
    const Signature sig(1 + trial % (n - 1), n - 1 - trial % (n - 1));
    EXPECT_EQ(orth_complement(orth_complement(u, sig, 0.0), sig, 0.0), u);
    EXPECT_EQ(orth_complement(u, sig, 0.0).dim(), n - u.dim());
  }
}

TEST(SubspaceProperties, FloatDimensionFormula) {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t n = 2 + trial % 6;
    const auto u = Subspace<C>::from_rows(random_matrix<C>(trial % (n + 1), n, rng), kDefaultTol);
    const auto v = Subspace<C>::from_rows(random_matrix<C>((trial / 3) % (n + 1), n, rng), kDefaultTol);
    EXPECT_EQ(sum(u, v, kDefaultTol).dim() + intersect(u, v, kDefaultTol).dim(), u.dim() + v.dim());
    const Signature sig(1, n - 1);
    EXPECT_TRUE(approx_equal(orth_complement(orth_complement(u, sig, kDefaultTol), sig, kDefaultTol), u, 1e-9));
  }
}
