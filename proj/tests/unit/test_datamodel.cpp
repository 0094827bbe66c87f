#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "lqcp/datamodel.hpp"

using namespace lqcp;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no lqcp::Error thrown";
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST(DataMatrix, ValidatesShapeAndValues) {
  const auto x = validate_matrix({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(x.n(), 3u);
  EXPECT_EQ(x.p(), 2u);
  EXPECT_EQ(x(2, 1), 6.0);
  EXPECT_EQ(code_of([] { validate_matrix({{1, std::nan("")}}); }), ErrorCode::NonFiniteEntry);
  EXPECT_EQ(code_of([] { validate_matrix({{1, 2}, {3}}); }), ErrorCode::NonRectangular);
  EXPECT_EQ(code_of([] { validate_matrix({}); }), ErrorCode::Empty);
  EXPECT_EQ(code_of([] { DataMatrix(2, 2, {1, 2, 3}); }), ErrorCode::NonRectangular);
}

TEST(DataMatrix, NonFiniteMessageNamesPosition) {
  try {
    validate_matrix({{1, 2}, {3, std::numeric_limits<double>::infinity()}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
  }
}

TEST(DataMatrix, ValuesPassThroughUnchanged) {
  const std::vector<std::vector<double>> raw{{0.1, -2.5e-300}, {1e300, 3}};
  const auto x = validate_matrix(raw);
  for (std::size_t t = 0; t < 2; ++t)
    for (std::size_t l = 0; l < 2; ++l) EXPECT_EQ(x(t, l), raw[t][l]);
}

TEST(DataMatrix, SliceRows) {
  const auto x = validate_matrix({{1}, {2}, {3}, {4}});
  const auto s = x.slice_rows(2, 3);
  EXPECT_EQ(s, validate_matrix({{2}, {3}}));
  EXPECT_EQ(code_of([&] { x.slice_rows(3, 5); }), ErrorCode::InvalidInterval);
}

TEST(EvenOrder, RejectsOddAndSmall) {
  EXPECT_EQ(EvenOrder(6).value(), 6);
  EXPECT_EQ(code_of([] { EvenOrder(3); }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([] { EvenOrder(0); }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([] { EvenOrder(-2); }), ErrorCode::InvalidOrder);
}

TEST(Interval, Bounds) {
  EXPECT_EQ(make_interval(1, 5, 5).length(), 5u);
  EXPECT_EQ(code_of([] { make_interval(0, 3, 5); }), ErrorCode::InvalidInterval);
  EXPECT_EQ(code_of([] { make_interval(4, 3, 5); }), ErrorCode::InvalidInterval);
  EXPECT_EQ(code_of([] { make_interval(2, 6, 5); }), ErrorCode::InvalidInterval);
}

TEST(Segmentation, CanonicalizesBreaks) {
  const Segmentation seg(10, {7, 3, 7, 5});
  EXPECT_EQ(seg.breaks(), (std::vector<std::size_t>{3, 5, 7}));
  EXPECT_EQ(seg.num_segments(), 4u);
  EXPECT_EQ(seg.segment_sizes(), (std::vector<std::size_t>{3, 2, 2, 3}));
  EXPECT_EQ(seg.labels(), (std::vector<std::size_t>{0, 0, 0, 1, 1, 2, 2, 3, 3, 3}));
  EXPECT_EQ(code_of([] { Segmentation(5, {5}); }), ErrorCode::BadLocation);
  EXPECT_EQ(code_of([] { Segmentation(5, {0}); }), ErrorCode::BadLocation);
  EXPECT_EQ(Segmentation(5).num_breaks(), 0u);
}

TEST(QSet, SortedDistinctEven) {
  const QSet s{6, 2};
  EXPECT_EQ(s.values(), (std::vector<int>{2, 6}));
  EXPECT_EQ(s.max().value(), 6);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(4));
  EXPECT_EQ(code_of([] { QSet{2, 2}; }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([] { QSet(std::vector<int>{}); }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([] { QSet{2, 5}; }), ErrorCode::InvalidOrder);
}

TEST(FallingFactorial, Values) {
  EXPECT_EQ(falling_factorial(5, 2), 20.0);
  EXPECT_EQ(falling_factorial(5, 0), 1.0);
  EXPECT_EQ(falling_factorial(1, 2), 0.0);
  EXPECT_EQ(falling_factorial(6, 6), 720.0);
}

TEST(Errors, NamesAreStable) {
  EXPECT_EQ(to_string(ErrorCode::DegenerateNormalizer), "DegenerateNormalizer");
  EXPECT_EQ(to_string(ErrorCode::UnknownScenario), "UnknownScenario");
}
