#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "grassorth/rigidity.hpp"
#include "grassorth/serialize.hpp"

using namespace grassorth;
using Q = GaussRational;
using C = Complex;

namespace {
AnalyzerConfig config(uint64_t seed) {
  AnalyzerConfig c;
  c.seed = seed;
  return c;
}
}  // namespace

TEST(Regime, Examples) {
  EXPECT_EQ(regime(3, 2, 3).tag, RegimeTag::Constant);
  EXPECT_EQ(regime(2, 2, 3).tag, RegimeTag::LinearRigid);
  EXPECT_EQ(regime(2, 2, 4).tag, RegimeTag::NoRigidity);
  EXPECT_FALSE(regime(2, 2, 3).hypothesis_violation);
  EXPECT_TRUE(regime(1, 2, 3).hypothesis_violation);
  EXPECT_TRUE(regime(2, 1, 3).hypothesis_violation);
  EXPECT_TRUE(regime(2, 4, 3).hypothesis_violation);
  // still computed arithmetically when flagged
  EXPECT_EQ(regime(1, 2, 3).tag, RegimeTag::NoRigidity);
}

TEST(Regime, FullGridAgainstInequalities) {
  for (long s = 2; s <= 6; ++s)
    for (long rp = 2; rp <= 12; ++rp)
      for (long sp = rp; sp <= 12; ++sp) {
        const long d = sp - rp;
        RegimeTag want = RegimeTag::NoRigidity;
        if (d < s - 1) {
          want = RegimeTag::Constant;
        } else if (d < 2 * (s - 1)) {
          want = RegimeTag::LinearRigid;
        }
        const auto got = regime(s, rp, sp);
        EXPECT_EQ(got.tag, want);
        EXPECT_EQ(got.lower, s - 1);
        EXPECT_EQ(got.upper, 2 * s - 2);
        EXPECT_FALSE(got.hypothesis_violation);
      }
}

TEST(Rigidity, NullSliceExamples) {
  const auto f = as_function(standard_embedding<Q>(2, 2, 3));
  const auto z = Matrix<Q>::from_rows({{Q(mpq_class(1, 3), 1), Q(2, -1)}});
  const auto slice = null_slice(f, z, 0, 0.0, 7);
  EXPECT_EQ(slice, span<Q>({{1, 0, 1, 0, 0}}, 5, 0.0));

  const auto fc = as_function(standard_embedding<C>(3, 3, 5));
  EXPECT_EQ(null_slice(fc, sample_non_null_point<C>(3, 4), 0, kDefaultTol, 8).dim(), 2u);
  const auto w = as_function(whitney_map<C>(2, 2));
  EXPECT_EQ(null_slice(w, sample_non_null_point<C>(2, 5), 0, kDefaultTol, 9).dim(), 1u);
  const auto k = as_function(constant_shilov_map<C>(2, 2, 3));
  EXPECT_EQ(null_slice(k, sample_non_null_point<C>(2, 6), 0, kDefaultTol, 10).dim(), 2u);
  try {
    null_slice(w, Matrix<C>(1, 2), 0, kDefaultTol, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(Rigidity, CommonNullExamples) {
  const auto cn = common_null_subspace(as_function(standard_embedding<Q>(2, 2, 3)), 3, 0, 0.0, 11);
  EXPECT_EQ(cn.subspace, span<Q>({{1, 0, 1, 0, 0}}, 5, 0.0));
  EXPECT_EQ(cn.signature, (SubSignature{0, 0, 1}));
  EXPECT_TRUE(cn.is_null);
  EXPECT_EQ(cn.containment_residual, 0.0);

  const auto k = common_null_subspace(as_function(constant_shilov_map<C>(2, 2, 3)), 3, 0, kDefaultTol, 12);
  EXPECT_EQ(k.subspace.dim(), 2u);
  EXPECT_TRUE(approx_equal(k.subspace, chart_point(evaluate(constant_shilov_map<C>(2, 2, 3), Matrix<C>(1, 2))).subspace(),
                           1e-12));

  const auto w = common_null_subspace(as_function(whitney_map<C>(2, 2)), 3, 0, kDefaultTol, 13);
  EXPECT_EQ(w.subspace.dim(), 1u);
  EXPECT_TRUE(w.is_null);
}

TEST(Rigidity, CommonNullEmptyForNonOrthogonalMap) {
  // F(z) = [[z1, z2]] into G(1, 2): no shared null direction
  PolyMatrixMap<C> f({1, 2}, {1, 2});
  f.set_entry(0, 0, MultiPoly<C>::variable(2, 0));
  f.set_entry(0, 1, MultiPoly<C>::variable(2, 1, C(2.0)));
  try {
    common_null_subspace(as_function(f), 3, 0, kDefaultTol, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyIntersection);
  }
}

TEST(Rigidity, DecomposeStandardEmbedding) {
  const auto f = as_function(standard_embedding<Q>(2, 2, 3));
  const auto n = span<Q>({{1, 0, 1, 0, 0}}, 5, 0.0);
  const auto dec = decompose(f, n, 10, 0.0, 3);
  EXPECT_EQ(dec.k_signature, (SubSignature{1, 2, 0}));
  EXPECT_EQ(dec.constant_part, n);
  EXPECT_EQ(subspace_signature(dec.n_perp, Signature(2, 3)), (SubSignature{1, 2, 1}));
  EXPECT_EQ(sum(dec.k, n, 0.0), dec.n_perp);
  ASSERT_EQ(dec.lines.size(), 10u);
  for (const auto& ls : dec.lines) {
    ASSERT_EQ(ls.line.dim(), 1u);
    const Vec<Q> expected{0, 1, 0, ls.z(0, 0), ls.z(0, 1)};
    EXPECT_EQ(ls.line, span<Q>({expected}, 5, 0.0));
  }
}

TEST(Rigidity, DecomposeGuards) {
  const auto f = as_function(constant_shilov_map<C>(2, 2, 3));
  const auto n = common_null_subspace(f, 2, 0, kDefaultTol, 4).subspace;
  EXPECT_THROW(decompose(f, n, 5, kDefaultTol, 4), Error);
}

TEST(Rigidity, LinesAreOneDimensionalOnBuiltins) {
  for (auto [s, rp, sp] : std::vector<std::array<size_t, 3>>{{2, 2, 3}, {3, 2, 4}, {3, 3, 5}, {4, 2, 5}}) {
    const auto f = as_function(standard_embedding<C>(s, rp, sp));
    const auto n = common_null_subspace(f, 3, 0, kDefaultTol, 5).subspace;
    for (const auto& ls : decompose(f, n, 100, kDefaultTol, 6).lines) EXPECT_EQ(ls.line.dim(), 1u);
  }
}

TEST(Rigidity, ClassifyExamples) {
  for (auto [s, rp, sp] : std::vector<std::array<size_t, 3>>{{2, 2, 3}, {3, 2, 4}, {3, 3, 5}, {4, 2, 5}}) {
    const auto rep = classify_map(standard_embedding<C>(s, rp, sp), config(s));
    EXPECT_EQ(rep.regime.tag, RegimeTag::LinearRigid);
    EXPECT_EQ(rep.classification, MapClass::StandardLinear) << s << rp << sp;
    ASSERT_TRUE(rep.common_null);
    EXPECT_EQ(rep.common_null->dim(), rp - 1);
    EXPECT_LE(*rep.residual("linear_model"), 1e-8);
  }
  const auto k = classify_map(constant_shilov_map<C>(3, 2, 3), config(1));
  EXPECT_EQ(k.classification, MapClass::Constant);
  EXPECT_EQ(k.regime.tag, RegimeTag::Constant);
  for (size_t s : {2, 3, 4})
    for (size_t rp : {2, 3}) {
      const auto w = classify_map(whitney_map<C>(s, rp), config(2));
      EXPECT_EQ(w.classification, MapClass::Other);
      EXPECT_EQ(w.regime.tag, RegimeTag::NoRigidity);
      EXPECT_GT(*w.residual("linear_model"), 1e-3);
    }
}

TEST(Rigidity, ClassifyExact) {
  EXPECT_EQ(classify_map(standard_embedding<Q>(2, 2, 3), config(3)).classification, MapClass::StandardLinear);
  EXPECT_EQ(classify_map(standard_embedding<Q>(3, 3, 5), config(3)).classification, MapClass::StandardLinear);
  EXPECT_EQ(classify_map(whitney_map<Q>(2, 2), config(3)).classification, MapClass::Other);
  EXPECT_EQ(classify_map(constant_shilov_map<Q>(2, 2, 3), config(3)).classification, MapClass::Constant);
}

TEST(Rigidity, NonOrthogonalMapIsOther) {
  const auto bad = fixtures::perturb(standard_embedding<C>(2, 2, 3), 1, 1, fixtures::unit_exponent(2, 0), C(0.01));
  const auto rep = classify_map(bad, config(4));
  EXPECT_EQ(rep.classification, MapClass::Other);
  EXPECT_FALSE(rep.diagnostics.empty());
}

TEST(Rigidity, ClassificationInvariantUnderAutomorphisms) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto gs = random_automorphism(Signature(1, 2), 100 + seed);
    const auto gt = random_automorphism(Signature(2, 3), 200 + seed);
    const auto f = compose_with_automorphisms(as_function(standard_embedding<C>(2, 2, 3)), gs, gt);
    EXPECT_EQ(classify_map(f, config(seed)).classification, MapClass::StandardLinear) << seed;
    const auto gw = random_automorphism(Signature(2, 4), 300 + seed);
    const auto w = compose_with_automorphisms(as_function(whitney_map<C>(2, 2)), gs, gw);
    EXPECT_EQ(classify_map(w, config(seed)).classification, MapClass::Other) << seed;
  }
}

TEST(Rigidity, DimensionBoundExamples) {
  const auto d = dimension_bound_check(as_function(standard_embedding<C>(2, 2, 3)), kDefaultTol, 1);
  EXPECT_EQ(d.k, 1u);
  EXPECT_EQ(d.lower, 4);
  EXPECT_EQ(d.upper, 4);
  EXPECT_EQ(d.span_dim, 4u);
  EXPECT_TRUE(d.holds);
  ASSERT_EQ(d.frame.size(), 3u);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = i + 1; j < 3; ++j)
      EXPECT_TRUE(is_orthogonal(chart_point(d.frame[i]), chart_point(d.frame[j]), 1e-9));

  const auto w = dimension_bound_check(as_function(whitney_map<C>(2, 2)), kDefaultTol, 2);
  EXPECT_EQ(w.k, 1u);
  EXPECT_EQ(w.lower, 4);
  EXPECT_EQ(w.upper, 5);
  EXPECT_TRUE(w.holds);

  const auto k = dimension_bound_check(as_function(constant_shilov_map<C>(2, 2, 3)), kDefaultTol, 3);
  EXPECT_EQ(k.k, 2u);
  EXPECT_EQ(k.lower, 2);
  EXPECT_EQ(k.upper, 3);
  EXPECT_TRUE(k.holds);

  const auto e = dimension_bound_check(as_function(standard_embedding<Q>(3, 2, 4)), 0.0, 4);
  EXPECT_EQ(e.k, 1u);
  EXPECT_TRUE(e.holds);
}

TEST(Rigidity, OrthogonalFrameSampler) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto frame = sample_orthogonal_frame<Q>(3, seed);
    ASSERT_EQ(frame.size(), 4u);
    for (size_t i = 0; i < frame.size(); ++i) {
      EXPECT_NE(classify_point(chart_point(frame[i])), PointKind::Null);
      for (size_t j = i + 1; j < frame.size(); ++j) EXPECT_TRUE(is_orthogonal(chart_point(frame[i]), chart_point(frame[j])));
    }
  }
}

TEST(Rigidity, HyperplaneSpanTest) {
  const auto k = hyperplane_span_test(as_function(constant_shilov_map<C>(2, 2, 3)), 3, kDefaultTol, 1);
  EXPECT_TRUE(k.null_expected);
  EXPECT_TRUE(k.null_confirmed);
  const auto s = hyperplane_span_test(as_function(standard_embedding<C>(2, 2, 3)), 3, kDefaultTol, 2);
  EXPECT_FALSE(s.null_expected);
  EXPECT_EQ(s.dim_open, 4u);
  for (size_t d : s.dim_hyperplanes) EXPECT_EQ(d, 3u);
  const auto w = hyperplane_span_test(as_function(whitney_map<C>(2, 2)), 3, kDefaultTol, 3);
  EXPECT_FALSE(w.null_confirmed);
  EXPECT_GT(w.shilov_defect, 1e-3);
}

TEST(Rigidity, ReportJsonShapeAndDeterminism) {
  const auto a = to_json(classify_map(standard_embedding<C>(2, 2, 3), config(9)));
  const auto b = to_json(classify_map(standard_embedding<C>(2, 2, 3), config(9)));
  EXPECT_EQ(a.dump(), b.dump());
  for (const char* key : {"regime", "classification", "common_null", "K", "linear_model", "residuals", "seeds"})
    EXPECT_TRUE(a.contains(key)) << key;
  EXPECT_EQ(a["classification"], "StandardLinear");
  EXPECT_EQ(a["regime"]["tag"], "LinearRigid");
}
