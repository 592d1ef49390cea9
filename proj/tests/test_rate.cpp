// SPDX-FileCopyrightText: 2026 segdelta contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <string>

#include "segdelta/error.hpp"
#include "segdelta/rate.hpp"

using namespace segdelta;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a segdelta::Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("the seven rate points match the reference ladder") {
  struct Row {
    const char* name;
    double qs, gpcc, l3c2;
  };
  // MPEG CTC ladder: qs plus measured G-PCC / L3C2 throughput at 10 fps.
  const Row expected[] = {
      {"R01", 0.0019, 0.0408, 0.1661},
      {"R02", 0.0039, 0.1102, 0.4125},
      {"R03", 0.0160, 0.5729, 1.7662},
      {"R04", 0.0310, 1.0965, 2.7951},
      {"R05", 0.1300, 2.2189, 4.2298},
      {"R06", 0.2500, 2.8484, 4.8205},
      {"NoCompression", 1.0000, 28.7465, 28.7465},
  };

  const auto table = preset_table();
  REQUIRE(table.size() == 7);
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].name == expected[i].name);
    CHECK(table[i].qs == expected[i].qs);
    CHECK(table[i].gpcc_mb_s == expected[i].gpcc);
    CHECK(table[i].l3c2_mb_s == expected[i].l3c2);
  }
}

TEST_CASE("find_preset is case-insensitive and total") {
  CHECK(find_preset("R03") == &preset_table()[2]);
  CHECK(find_preset("r03") == &preset_table()[2]);
  CHECK(find_preset("nocompression") == &preset_table()[6]);
  CHECK(find_preset("NOCOMPRESSION") == &preset_table()[6]);
  CHECK(find_preset("R07") == nullptr);
  CHECK(find_preset("") == nullptr);
}

TEST_CASE("throughput uses decimal megabytes") {
  const RateReport mb = throughput(1000000, 10, 10.0);
  CHECK(mb.throughput_mb_s == 1.0);
  CHECK(mb.total_bytes == 1000000);
  CHECK(mb.frame_count == 10);
  CHECK(mb.fps == 10.0);

  // one raw scan per second: 2874650 bytes over a single frame at 10 fps
  CHECK(throughput(2874650, 1, 10.0).throughput_mb_s == 28.7465);

  CHECK(throughput(0, 5, 10.0).throughput_mb_s == 0.0);
  CHECK(throughput(500000, 1, 1.0).throughput_mb_s == 0.5);
}

TEST_CASE("throughput rejects degenerate inputs") {
  CHECK(code_of([] { throughput(100, 0, 10.0); }) == ErrorCode::ZeroFrames);
  CHECK(code_of([] { throughput(100, 1, 0.0); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { throughput(100, 1, -2.0); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          throughput(100, 1, std::numeric_limits<double>::quiet_NaN());
        }) == ErrorCode::InvalidArgument);
}
