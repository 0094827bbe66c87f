#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "lqcp/csv.hpp"

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

TEST(Csv, ReadsPlainNumbers) {
  std::istringstream in("1,2\n3.5,-4e-2\n\n5,6\n");
  const auto m = read_csv_matrix(in);
  EXPECT_EQ(m.data, validate_matrix({{1, 2}, {3.5, -0.04}, {5, 6}}));
  EXPECT_TRUE(m.column_names.empty());
}

TEST(Csv, HeaderDetection) {
  std::istringstream in("a,b\n1,2\n");
  const auto m = read_csv_matrix(in);
  EXPECT_EQ(m.column_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(m.data.n(), 1u);

  std::istringstream numeric("1,2\n3,4\n");
  const auto forced = read_csv_matrix(numeric, HeaderMode::Present);
  EXPECT_EQ(forced.column_names, (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(forced.data.n(), 1u);
}

TEST(Csv, Errors) {
  std::istringstream empty("");
  EXPECT_EQ(code_of([&] { read_csv_matrix(empty); }), ErrorCode::Empty);
  std::istringstream ragged("1,2\n3\n");
  EXPECT_EQ(code_of([&] { read_csv_matrix(ragged); }), ErrorCode::NonRectangular);
  std::istringstream bad("1,2\n3,x\n");
  EXPECT_EQ(code_of([&] { read_csv_matrix(bad, HeaderMode::Absent); }), ErrorCode::Parse);
  std::istringstream nan("1,2\n3,nan\n");
  const auto c = code_of([&] { read_csv_matrix(nan, HeaderMode::Absent); });
  EXPECT_TRUE(c == ErrorCode::NonFiniteEntry || c == ErrorCode::Parse);
  EXPECT_EQ(code_of([] { read_csv_matrix(std::string("/nonexistent/file.csv")); }), ErrorCode::Io);
}

TEST(Csv, ParseErrorNamesRowAndColumn) {
  std::istringstream bad("1,2\n3,4\n5,1.2.3\n");
  try {
    read_csv_matrix(bad, HeaderMode::Absent);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(Csv, RoundTripIsExact) {
  const auto x = validate_matrix({{0.1, 1.0 / 3.0}, {-2.718281828459045, 1e-310}, {6.02214076e23, -0.0}});
  std::stringstream buf;
  write_csv_matrix(buf, x, {"u", "v"});
  const auto back = read_csv_matrix(buf);
  EXPECT_EQ(back.column_names, (std::vector<std::string>{"u", "v"}));
  ASSERT_EQ(back.data.n(), 3u);
  for (std::size_t i = 0; i < x.values().size(); ++i) EXPECT_EQ(back.data.values()[i], x.values()[i]);
}

TEST(Csv, LargeShape) {
  std::stringstream buf;
  for (int t = 0; t < 43; ++t) {
    for (int l = 0; l < 200; ++l) buf << (l ? "," : "") << (t * 0.5 - l);
    buf << "\n";
  }
  const auto m = read_csv_matrix(buf);
  EXPECT_EQ(m.data.n(), 43u);
  EXPECT_EQ(m.data.p(), 200u);
}
