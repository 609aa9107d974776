#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "techevo/csv.hpp"
#include "test_util.hpp"

using techevo::TimeSeries;
using techevo::errc;
using testutil::code_of;
using testutil::message_of;
using testutil::write_file;

TEST_CASE("parses a plain headered file and sorts rows by year") {
  const std::string path = write_file("csv_basic.csv",
                                      "year,value\n"
                                      "1922,2.0\n"
                                      "1920,1.0\n"
                                      "1921,1.5\n");
  const TimeSeries s = techevo::parse_csv(path);
  CHECK(s.times() == std::vector<double>{1920, 1921, 1922});
  CHECK(s.values() == std::vector<double>{1.0, 1.5, 2.0});
  CHECK(s.name() == "value");
}

TEST_CASE("custom column names and extra columns") {
  const std::string path = write_file("csv_cols.csv",
                                      "t,ignored,speed\n"
                                      "1.5,x,10\n"
                                      "2.5,y,20\n"
                                      "3.5,z,30\n");
  const TimeSeries s = techevo::parse_csv(path, "t", "speed");
  CHECK(s.times() == std::vector<double>{1.5, 2.5, 3.5});
  CHECK(s.values() == std::vector<double>{10, 20, 30});
}

TEST_CASE("UTF-8 BOM and CRLF line endings are accepted") {
  const std::string path = write_file("csv_bomcrlf.csv",
                                      "\xEF\xBB\xBFyear,value\r\n"
                                      "1,1.0\r\n"
                                      "2,2.0\r\n"
                                      "3,3.0\r\n");
  const TimeSeries s = techevo::parse_csv(path);
  CHECK(s.size() == 3);
  CHECK(s.values()[2] == 3.0);
}

TEST_CASE("blank lines are skipped") {
  const std::string path = write_file("csv_blank.csv",
                                      "year,value\n\n1,1\n\n2,2\n3,3\n\n");
  CHECK(techevo::parse_csv(path).size() == 3);
}

TEST_CASE("missing column is reported by name") {
  const std::string path = write_file("csv_missing.csv", "year,value\n1,1\n2,2\n3,3\n");
  CHECK(code_of([&] { techevo::parse_csv(path, "year", "speed"); }) == errc::missing_column);
  CHECK(message_of([&] { techevo::parse_csv(path, "year", "speed"); }).find("speed") !=
        std::string::npos);
}

TEST_CASE("non-numeric cell is reported with its file line") {
  const std::string path = write_file("csv_nonnum.csv",
                                      "year,value\n"
                                      "1920,1.0\n"
                                      "1921,oops\n"
                                      "1922,2.0\n");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::non_numeric_cell);
  CHECK(message_of([&] { techevo::parse_csv(path); }).find("row 3") != std::string::npos);
}

TEST_CASE("non-positive value is rejected with its file line") {
  const std::string path = write_file("csv_nonpos.csv",
                                      "year,value\n"
                                      "1920,1.0\n"
                                      "1921,-1.0\n"
                                      "1922,2.0\n");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::non_positive_value);
  const std::string msg = message_of([&] { techevo::parse_csv(path); });
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("1921") != std::string::npos);
}

TEST_CASE("duplicate years are an error") {
  const std::string path = write_file("csv_dup.csv", "year,value\n1,1\n1,2\n2,3\n");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::duplicate_time);
}

TEST_CASE("fewer than 3 data rows fails validation") {
  const std::string path = write_file("csv_short.csv", "year,value\n1920,2.73\n1921,3.01\n");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::insufficient_data);
}

TEST_CASE("short rows are rejected") {
  const std::string path = write_file("csv_ragged.csv", "year,value\n1,1\n2\n3,3\n");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::non_numeric_cell);
}

TEST_CASE("missing file fails cleanly") {
  CHECK(code_of([] { techevo::parse_csv("/nonexistent/no.csv"); }) == errc::invalid_config);
}

TEST_CASE("empty file has no header") {
  const std::string path = write_file("csv_empty.csv", "");
  CHECK(code_of([&] { techevo::parse_csv(path); }) == errc::missing_column);
}

TEST_CASE("write then parse is the identity on the point list") {
  std::vector<techevo::TimePoint> pts;
  for (int i = 0; i < 9; ++i)
    pts.push_back({1950.0 + i, 0.1 + 0.37 * i + (i % 3) * 0.0625});
  const TimeSeries s("value", "", pts);

  std::ostringstream os;
  techevo::write_csv(os, s);
  const std::string path = write_file("csv_roundtrip.csv", os.str());
  const TimeSeries back = techevo::parse_csv(path);

  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.times()[i] == s.times()[i]);
    CHECK(back.values()[i] == s.values()[i]);
  }
}

TEST_CASE("write_csv honors custom column names") {
  const TimeSeries s("value", "", {{1, 1}, {2, 2}, {3, 3}});
  std::ostringstream os;
  techevo::write_csv(os, s, "t", "speed");
  CHECK(os.str() == "t,speed\n1,1\n2,2\n3,3\n");
}

TEST_CASE("17-significant-digit formatting round-trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, 2.2222222222222223, 1e-17, 123456789.123456789}) {
    const std::string str = techevo::detail::g17(v);
    CHECK(std::stod(str) == v);
  }
}
