#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtilt/field.hpp"
#include "qtilt/matrix.hpp"

using namespace qtilt;

TEST_CASE("rational parsing and printing") {
  Field Q = make_field(0);
  CHECK(Q.to_string(Q.parse("5")) == "5");
  CHECK(Q.to_string(Q.parse("-3/7")) == "-3/7");
  CHECK(Q.to_string(Q.parse("2/4")) == "1/2");
  CHECK(Q.to_string(Q.parse("-0")) == "0");
  CHECK(Q.eq(Q.parse("6/4"), Q.parse("3/2")));
  CHECK(Q.is_zero(Q.sub(Q.parse("1/3"), Q.parse("2/6"))));
  CHECK_THROWS_AS(Q.parse("1/0"), FieldError);
  CHECK_THROWS_AS(Q.parse(""), FieldError);
  CHECK_THROWS_AS(Q.parse("1/2/3"), FieldError);
  CHECK_THROWS_AS(Q.parse("x"), FieldError);
  CHECK_THROWS_AS(Q.parse("1.5"), FieldError);
}

TEST_CASE("rational arithmetic is exact") {
  Field Q = make_field(0);
  Scalar a = Q.parse("1/3");
  Scalar s = Q.zero();
  for (int i = 0; i < 3000; ++i) s = Q.add(s, a);
  CHECK(Q.to_string(s) == "1000");
  CHECK(Q.to_string(Q.inv(Q.parse("-5/9"))) == "-9/5");
}

TEST_CASE("prime field arithmetic") {
  Field F5 = make_field(5);
  CHECK(F5.to_string(F5.from_int(-3)) == "2");
  CHECK(F5.to_string(F5.parse("7")) == "2");
  CHECK(F5.to_string(F5.parse("-1")) == "4");
  CHECK(F5.to_string(F5.parse("1/2")) == "3");
  CHECK(F5.eq(F5.mul(F5.parse("1/2"), F5.from_int(2)), F5.one()));
  CHECK_THROWS_AS(F5.parse("1/5"), FieldError);
  CHECK_THROWS_AS(F5.inv(F5.zero()), FieldError);

  Field F2 = make_field(2);
  CHECK(F2.eq(F2.add(F2.one(), F2.one()), F2.zero()));
}

TEST_CASE("field construction validates the characteristic") {
  CHECK_THROWS_AS(make_field(1), FieldError);
  CHECK_THROWS_AS(make_field(4), FieldError);
  CHECK_THROWS_AS(make_field(-2), FieldError);
  CHECK_THROWS_AS(make_field(1LL << 32), FieldError);
  CHECK(make_field(2147483647).p == 2147483647u);  // Mersenne prime 2^31-1
}

static Matrix mat(Field F, int rows, int cols, const std::vector<long long>& v) {
  Matrix m(F, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = F.from_int(v[i * cols + j]);
  return m;
}

TEST_CASE("matrix multiply and transpose") {
  Field Q = make_field(0);
  Matrix a = mat(Q, 2, 3, {1, 2, 3, 4, 5, 6});
  Matrix b = mat(Q, 3, 2, {7, 8, 9, 10, 11, 12});
  CHECK(mul(a, b) == mat(Q, 2, 2, {58, 64, 139, 154}));
  CHECK(a.transpose() == mat(Q, 3, 2, {1, 4, 2, 5, 3, 6}));
  CHECK(mul(Matrix::identity(Q, 2), a) == a);
}

TEST_CASE("rref, rank and kernel") {
  Field Q = make_field(0);
  Matrix a = mat(Q, 2, 2, {1, 2, 2, 4});
  CHECK(rank(a) == 1);
  Matrix k = kernel(a);
  REQUIRE(k.cols() == 1);
  CHECK(mul(a, k).is_zero());
  CHECK(Q.to_string(k.at(0, 0)) == "-2");
  CHECK(Q.to_string(k.at(1, 0)) == "1");

  Matrix full = mat(Q, 3, 3, {2, 0, 1, 1, 1, 0, 0, 3, 1});
  CHECK(rank(full) == 3);
  CHECK(kernel(full).cols() == 0);
}

TEST_CASE("solve and inverse") {
  Field Q = make_field(0);
  Matrix a = mat(Q, 2, 2, {1, 2, 3, 4});
  Matrix b = mat(Q, 2, 1, {5, 11});
  auto x = solve(a, b);
  REQUIRE(x.has_value());
  CHECK(mul(a, *x) == b);

  auto ainv = inverse(a);
  REQUIRE(ainv.has_value());
  CHECK(mul(a, *ainv) == Matrix::identity(Q, 2));

  Matrix sing = mat(Q, 2, 2, {1, 2, 2, 4});
  CHECK(!inverse(sing).has_value());
  CHECK(!solve(sing, mat(Q, 2, 1, {0, 1})).has_value());
  // Inconsistent wide system still reports failure.
  CHECK(!solve(mat(Q, 2, 3, {1, 0, 0, 1, 0, 0}), mat(Q, 2, 1, {1, 2})).has_value());
}

TEST_CASE("subspace helpers") {
  Field F2 = make_field(2);
  // Two distinct planes in F_2^3 meet in a line.
  Matrix u = mat(F2, 3, 2, {1, 0, 0, 1, 0, 0});
  Matrix w = mat(F2, 3, 2, {1, 0, 0, 0, 0, 1});
  Matrix cap = intersect_columns(u, w);
  REQUIRE(cap.cols() == 1);
  CHECK(F2.is_one(cap.at(0, 0)));
  CHECK(F2.is_zero(cap.at(1, 0)));
  CHECK(F2.is_zero(cap.at(2, 0)));
  CHECK(columns_contained(cap, u));
  CHECK(columns_contained(cap, w));

  Field Q = make_field(0);
  Matrix proj = mat(Q, 2, 3, {1, 0, 0, 0, 1, 0});  // drop last coordinate
  Matrix line = mat(Q, 2, 1, {1, 1});
  Matrix pre = preimage_columns(proj, line);
  CHECK(pre.cols() == 2);
  CHECK(columns_contained(mat(Q, 3, 1, {0, 0, 5}), pre));
  CHECK(columns_contained(mat(Q, 3, 1, {1, 1, 0}), pre));
  CHECK(!columns_contained(mat(Q, 3, 1, {1, 0, 0}), pre));

  // Echelonized bases are canonical: same space, same matrix.
  Matrix s1 = mat(Q, 3, 2, {1, 1, 1, 2, 1, 3});
  Matrix s2 = mat(Q, 3, 2, {2, 3, 3, 5, 4, 7});
  CHECK(column_echelon(s1) == column_echelon(s2));
}

TEST_CASE("block helpers") {
  Field Q = make_field(0);
  Matrix a = mat(Q, 1, 1, {1});
  Matrix b = mat(Q, 2, 2, {2, 0, 0, 3});
  Matrix d = dsum(a, b);
  CHECK(d.rows() == 3);
  CHECK(d.cols() == 3);
  CHECK(Q.to_string(d.at(1, 1)) == "2");
  CHECK(Q.is_zero(d.at(0, 2)));
  CHECK(select_columns(d, {2, 0}) == mat(Q, 3, 2, {0, 1, 0, 0, 3, 0}));
}
