#include <doctest.h>

#include <random>

#include "cooprpl/errors.hpp"
#include "cooprpl/messages.hpp"

using namespace cooprpl;

namespace {

template <class F>
bool throws_codec(F&& f) {
  try {
    f();
  } catch (const SimError& e) {
    return e.kind() == ErrorKind::Codec;
  }
  return false;
}

}  // namespace

TEST_SUITE("messages") {

TEST_CASE("DIO round trip keeps every field up to rank quantization") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> rank(0.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    DioMessage m;
    m.sender = static_cast<NodeId>(gen() % 65536);
    m.rank = Rank{rank(gen)};
    m.dodag_id = static_cast<std::uint32_t>(gen());
    if (i % 2) m.relay_suboption = static_cast<NodeId>(gen() % 65536);
    const auto back = codec::decode_dio(codec::encode(m));
    CHECK(back.sender == m.sender);
    CHECK(back.dodag_id == m.dodag_id);
    CHECK(back.relay_suboption == m.relay_suboption);
    CHECK(back.rank.value == codec::quantize_rank(m.rank.value));
    CHECK(std::abs(back.rank.value - m.rank.value) <= 0.5 / codec::kRankUnit);
  }
}

TEST_CASE("quantized ranks are exact multiples of the rank unit") {
  CHECK(codec::quantize_rank(1.0) == 1.0);
  CHECK(codec::quantize_rank(1.5) == 1.5);
  CHECK(codec::quantize_rank(1.0 / 3.0) * codec::kRankUnit == std::round(codec::kRankUnit / 3.0));
}

TEST_CASE("DIS and DAO round trip exactly") {
  const DisMessage dis{77};
  CHECK(codec::decode_dis(codec::encode(dis)) == dis);
  const DaoMessage dao{12, 40, 3};
  CHECK(codec::decode_dao(codec::encode(dao)) == dao);
}

TEST_CASE("frames start with the RPL code and the sender id") {
  const auto dio = codec::encode(DioMessage{0x0102, Rank{1.0}, 1, std::nullopt});
  REQUIRE(dio.size() >= 3);
  CHECK(dio[0] == codec::kCodeDio);
  CHECK(dio[1] == 0x01);
  CHECK(dio[2] == 0x02);
  CHECK(codec::encode(DisMessage{5})[0] == codec::kCodeDis);
  CHECK(codec::encode(DaoMessage{5, 6, 7})[0] == codec::kCodeDao);
}

TEST_CASE("the relay sub-option adds a four-byte option") {
  const auto plain = codec::encode(DioMessage{9, Rank{2.0}, 1, std::nullopt});
  const auto with_relay = codec::encode(DioMessage{9, Rank{2.0}, 1, NodeId{4}});
  CHECK(with_relay.size() == plain.size() + 4);
  CHECK(with_relay[plain.size()] == codec::kOptionRelay);
}

TEST_CASE("malformed frames are rejected") {
  auto dio = codec::encode(DioMessage{9, Rank{2.0}, 1, NodeId{4}});
  for (std::size_t cut = 0; cut < dio.size(); ++cut) {
    if (cut == dio.size() - 4) continue;  // a frame without the option is valid
    const std::vector<std::uint8_t> truncated(dio.begin(), dio.begin() + static_cast<long>(cut));
    CHECK(throws_codec([&] { codec::decode_dio(truncated); }));
  }
  auto wrong = dio;
  wrong[0] = codec::kCodeDao;
  CHECK(throws_codec([&] { codec::decode_dio(wrong); }));
  CHECK(throws_codec([&] { codec::decode_dao(codec::encode(DisMessage{1})); }));
  CHECK(throws_codec([&] { codec::encode(DioMessage{70000, Rank{1.0}, 1, std::nullopt}); }));
  CHECK(throws_codec([&] { codec::encode(DioMessage{1, Rank{-1.0}, 1, std::nullopt}); }));
}

}  // TEST_SUITE
