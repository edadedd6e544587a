#include <gtest/gtest.h>

#include "doikit/error.hpp"
#include "doikit/matrix.hpp"

using namespace doikit;

TEST(Matrix, ConstructionAndShape) {
  ComplexMatrix m{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 2), Complex(6.0));
  EXPECT_FALSE(m.is_square());
  EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), Error);
}

TEST(Matrix, RaggedInitializerRejected) {
  EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), Error);
}

TEST(Matrix, ArithmeticAndAdjoint) {
  const Complex i(0.0, 1.0);
  ComplexMatrix a{{1.0, i}, {0.0, 2.0}};
  ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
  const ComplexMatrix ab = a * b;
  EXPECT_EQ(ab(0, 0), i);
  EXPECT_EQ(ab(0, 1), Complex(1.0));
  EXPECT_EQ(ab(1, 0), Complex(2.0));
  EXPECT_EQ(a.adjoint()(1, 0), -i);
  EXPECT_EQ((a + b)(0, 1), 1.0 + i);
  EXPECT_EQ((a - a), ComplexMatrix::zeros(2, 2));
  EXPECT_EQ((2.0 * b)(1, 0), Complex(2.0));
  EXPECT_THROW(a * ComplexMatrix(3, 1), Error);
  EXPECT_THROW(a + ComplexMatrix(3, 3), Error);
}

TEST(Matrix, HadamardAndNorms) {
  ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
  const ComplexMatrix h = hadamard(a, a);
  EXPECT_EQ(h(1, 1), Complex(16.0));
  EXPECT_NEAR(frobenius_norm(a), std::sqrt(30.0), 1e-15);
  EXPECT_EQ(max_abs_entry(a), 4.0);
  EXPECT_EQ(frobenius_norm(ComplexMatrix(0, 0)), 0.0);
}

TEST(Matrix, FrobeniusNormSurvivesExtremeScales) {
  ComplexMatrix big{{1e200, 1e200}};
  EXPECT_NEAR(frobenius_norm(big) / (std::sqrt(2.0) * 1e200), 1.0, 1e-14);
  ComplexMatrix tiny{{1e-200, 1e-200}};
  EXPECT_NEAR(frobenius_norm(tiny) / (std::sqrt(2.0) * 1e-200), 1.0, 1e-14);
}

TEST(Matrix, Defects) {
  ComplexMatrix herm{{1.0, Complex(0, 1)}, {Complex(0, -1), 2.0}};
  EXPECT_EQ(hermitian_defect(herm), 0.0);
  EXPECT_EQ(normality_defect(herm), 0.0);
  ComplexMatrix shift{{0.0, 1.0}, {0.0, 0.0}};
  EXPECT_GT(normality_defect(shift), 1.0);
  EXPECT_EQ(unitarity_defect(ComplexMatrix::identity(3)), 0.0);
}

TEST(Matrix, FiniteCheck) {
  ComplexMatrix m{{1.0}};
  EXPECT_TRUE(m.all_finite());
  m(0, 0) = Complex(std::nan(""), 0.0);
  EXPECT_FALSE(m.all_finite());
}

TEST(Matrix, DiagonalAndColumns) {
  const std::vector<double> d{1.0, 2.0};
  const ComplexMatrix m = ComplexMatrix::diagonal(std::span<const double>(d));
  EXPECT_EQ(m(1, 1), Complex(2.0));
  EXPECT_EQ(m(0, 1), Complex(0.0));
  auto c = m.column(1);
  EXPECT_EQ(c[1], Complex(2.0));
  ComplexMatrix n(2, 2);
  n.set_column(0, c);
  EXPECT_EQ(n(1, 0), Complex(2.0));
}
