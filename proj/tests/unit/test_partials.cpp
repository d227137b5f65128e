#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussmax/error.hpp"
#include "gaussmax/partials.hpp"
#include "test_support.hpp"

using namespace gaussmax;

TEST_CASE("diff_correlation cases") {
  const auto id = CorrelationMatrix::identity(4);
  CHECK(diff_correlation(id, 1, 2, 3) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(diff_correlation(id, 1, 2, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(diff_correlation(id, 1, 1, 3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(diff_correlation(id, 2, 2, 2) == 1.0);

  const CorrelationMatrix tied({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  CHECK_THROWS_AS(diff_correlation(tied, 1, 2, 3), Error);
  CHECK_THROWS_AS(diff_correlation(id, 0, 2, 3), Error);
}

TEST_CASE("diff_correlation matches the covariance of the differences") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 100; ++t) {
    const auto r = testing::random_correlation(4, gen);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j)
        for (int k = 1; k <= 4; ++k) {
          const double cov = testing::diff_covariance(r, i, j, k);
          const double expected =
              cov / std::sqrt(testing::diff_covariance(r, i, j, j) * testing::diff_covariance(r, i, k, k));
          CHECK(diff_correlation(r, i, j, k) == doctest::Approx(expected).epsilon(1e-12));
          CHECK(diff_correlation(r, i, j, k) == diff_correlation(r, i, k, j));
        }
  }
}

TEST_CASE("complement_indices") {
  const int a[] = {1, 2};
  CHECK(complement_indices(4, a) == std::vector<int>{3, 4});
  const int b[] = {2, 4};
  CHECK(complement_indices(5, b) == std::vector<int>{1, 3, 5});
  const int c[] = {1, 3, 5};
  CHECK(complement_indices(5, c) == std::vector<int>{2, 4});
  const int dup[] = {2, 2};
  CHECK_THROWS_AS(complement_indices(4, dup), Error);
  const int out[] = {0, 2};
  CHECK_THROWS_AS(complement_indices(4, out), Error);
}

TEST_CASE("partial_corr_one") {
  SUBCASE("independence gives 1/3") {
    for (std::size_t ell : {4u, 5u, 6u}) {
      const auto p = partial_corr_one(CorrelationMatrix::identity(ell), 1, 2, 3, 4);
      CHECK(p.value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
      CHECK(p.pivot == 1);
      CHECK(p.given.size == 1);
    }
  }
  SUBCASE("AR(1) agrees with the residual-correlation oracle") {
    const auto r = ar1_matrix(Ar1Parameter(0.5), 4);
    const double v = partial_corr_one(r, 1, 2, 3, 4).value;
    CHECK(std::abs(v) <= 1.0);
    CHECK(v == doctest::Approx(testing::schur_partial_correlation(r, 1, 3, 4, {2})).epsilon(1e-6));
  }
  SUBCASE("swapping the pair") {
    const auto r = ar1_matrix(Ar1Parameter(0.5), 4);
    CHECK(partial_corr_one(r, 1, 2, 3, 4).value == partial_corr_one(r, 1, 2, 4, 3).value);
  }
  SUBCASE("distinct indices required") {
    CHECK_THROWS_AS(partial_corr_one(CorrelationMatrix::identity(4), 1, 1, 3, 4), Error);
  }
}

TEST_CASE("partial_corr_two") {
  SUBCASE("independence gives 1/4") {
    const auto p = partial_corr_two(CorrelationMatrix::identity(5), 1, 2, 3, 4, 5);
    CHECK(p.value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.given.size == 2);
  }
  SUBCASE("AR(1) agrees with the residual-correlation oracle") {
    const auto r = ar1_matrix(Ar1Parameter(0.5), 5);
    CHECK(partial_corr_two(r, 1, 2, 3, 4, 5).value ==
          doctest::Approx(testing::schur_partial_correlation(r, 1, 4, 5, {2, 3})).epsilon(1e-6));
  }
  SUBCASE("swapping the pair") {
    const auto r = ar1_matrix(Ar1Parameter(0.5), 5);
    CHECK(partial_corr_two(r, 1, 2, 3, 4, 5).value == partial_corr_two(r, 1, 2, 3, 5, 4).value);
  }
}

TEST_CASE("degenerate conditioning is an error, not infinity") {
  // X2 = X3, so X1 - X2 and X1 - X3 are perfectly correlated.
  const CorrelationMatrix twin({{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}});
  try {
    (void)partial_corr_one(twin, 1, 2, 3, 4);
    FAIL("expected DegenerateConditioning");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateConditioning);
  }
  // A singular matrix whose differences are all non-degenerate is fine.
  const double s = std::sqrt(0.5);
  const CorrelationMatrix r({{1, 0, s, 0}, {0, 1, s, 0}, {s, s, 1, 0}, {0, 0, 0, 1}});
  CHECK_NOTHROW(partial_corr_one(r, 4, 1, 2, 3));
}

TEST_CASE("property: closed forms equal the Schur-complement oracle") {
  std::mt19937_64 gen(17);
  int checked = 0;
  for (std::size_t ell : {4u, 5u, 6u}) {
    for (int t = 0; t < 40; ++t) {
      const auto r = testing::random_correlation(ell, gen);
      const int n = static_cast<int>(ell);
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          if (j == i) continue;
          const int fixed1[] = {i, j};
          const auto rest1 = complement_indices(n, fixed1);
          const double one = partial_corr_one(r, i, j, rest1[0], rest1[1]).value;
          CHECK(one == doctest::Approx(testing::schur_partial_correlation(r, i, rest1[0], rest1[1], {j})).epsilon(1e-9));
          ++checked;
          if (ell < 5) continue;
          for (int k = 1; k <= n; ++k) {
            if (k == i || k == j) continue;
            const int fixed2[] = {i, j, k};
            const auto rest2 = complement_indices(n, fixed2);
            const double two = partial_corr_two(r, i, j, k, rest2[0], rest2[1]).value;
            CHECK(std::abs(two - testing::schur_partial_correlation(r, i, rest2[0], rest2[1], {j, k})) <= 1e-9);
            // Conditioning symmetry.
            CHECK(std::abs(two - partial_corr_two(r, i, k, j, rest2[0], rest2[1]).value) <= 1e-14);
            CHECK(two == partial_corr_two(r, i, j, k, rest2[1], rest2[0]).value);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("reduced matrices") {
  SUBCASE("independence") {
    const auto a = reduced_matrix_one(CorrelationMatrix::identity(4), 1, 2);
    CHECK(a.dim == 2);
    CHECK(a(0, 1) == doctest::Approx(1.0 / 3.0));
    const auto b = reduced_matrix_one(CorrelationMatrix::identity(5), 2, 4);
    CHECK(b.dim == 3);
    for (double v : b.upper()) CHECK(v == doctest::Approx(1.0 / 3.0));
    const auto c = reduced_matrix_two(CorrelationMatrix::identity(5), 1, 2, 3);
    CHECK(c.dim == 2);
    CHECK(c(1, 0) == doctest::Approx(0.25));
    const auto d = reduced_matrix_two(CorrelationMatrix::identity(6), 1, 2, 3);
    CHECK(d.dim == 3);
    for (double v : d.upper()) CHECK(v == doctest::Approx(0.25));
  }
  SUBCASE("AR(1) outputs validate") {
    CHECK_NOTHROW((void)reduced_matrix_one(ar1_matrix(Ar1Parameter(0.5), 5), 1, 2).to_correlation_matrix());
    CHECK_NOTHROW((void)reduced_matrix_two(ar1_matrix(Ar1Parameter(-0.3), 6), 2, 4, 6).to_correlation_matrix());
  }
  SUBCASE("entries follow the sorted complement") {
    const auto r = ar1_matrix(Ar1Parameter(0.4), 5);
    const auto m = reduced_matrix_one(r, 2, 4);
    CHECK(m(0, 1) == partial_corr_one(r, 2, 4, 1, 3).value);
    CHECK(m(0, 2) == partial_corr_one(r, 2, 4, 1, 5).value);
    CHECK(m(1, 2) == partial_corr_one(r, 2, 4, 3, 5).value);
  }
  SUBCASE("unsupported sizes") {
    CHECK_THROWS_AS(reduced_matrix_one(CorrelationMatrix::identity(3), 1, 2), Error);
    CHECK_THROWS_AS(reduced_matrix_one(CorrelationMatrix::identity(6), 1, 2), Error);
    CHECK_THROWS_AS(reduced_matrix_two(CorrelationMatrix::identity(4), 1, 2, 3), Error);
  }
}

TEST_CASE("property: every reduced matrix is a valid correlation matrix") {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 60; ++t) {
    const auto r5 = testing::random_correlation(5, gen, 1);
    const auto r6 = testing::random_correlation(6, gen, 1);
    for (int i = 1; i <= 5; ++i)
      for (int j = 1; j <= 5; ++j)
        if (i != j) CHECK_NOTHROW((void)reduced_matrix_one(r5, i, j).to_correlation_matrix());
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j)
        for (int k = 1; k <= 6; ++k)
          if (i != j && j != k && i != k)
            CHECK_NOTHROW((void)reduced_matrix_two(r6, i, j, k).to_correlation_matrix());
  }
}

TEST_CASE("pivot swap under single conditioning") {
  // X_j - X_m = (X_i - X_m) - (X_i - X_j), so conditioning on X_i - X_j spans the same
  // space for pivot i or j and the partial correlation is unchanged.
  const auto r = ar1_matrix(Ar1Parameter(0.5), 4);
  CHECK(partial_corr_one(r, 1, 2, 3, 4).value == doctest::Approx(partial_corr_one(r, 2, 1, 3, 4).value).epsilon(1e-14));
  std::mt19937_64 gen(77);
  for (int t = 0; t < 200; ++t) {
    const auto q = testing::random_correlation(5, gen);
    CHECK(std::abs(partial_corr_one(q, 1, 2, 3, 4).value - partial_corr_one(q, 2, 1, 3, 4).value) <= 1e-12);
  }
  // The unconditioned difference correlations do depend on the pivot.
  CHECK(std::abs(diff_correlation(r, 1, 3, 4) - diff_correlation(r, 2, 3, 4)) > 1e-3);
}
