#include "cooprpl/messages.hpp"

#include <algorithm>
#include <cmath>

#include "cooprpl/errors.hpp"

namespace cooprpl::codec {
namespace {

constexpr std::uint8_t kInstanceId = 0;
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kDioBaseSize = 1 + 2 + 1 + 1 + 2 + 1 + 1 + 1 + 1 + 16;

void put16(std::vector<std::uint8_t>& out, std::uint32_t v) {
  if (v > 0xFFFF) throw SimError(ErrorKind::Codec, "codec: value does not fit in 16 bits");
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

std::uint16_t get16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}

std::uint16_t rank_field(double rank) {
  const double scaled = std::round(rank * kRankUnit);
  if (!(scaled >= 0.0) || scaled > 0xFFFF) throw SimError(ErrorKind::Codec, "codec: rank out of range");
  return static_cast<std::uint16_t>(scaled);
}

void expect(bool ok, const char* what) {
  if (!ok) throw SimError(ErrorKind::Codec, std::string("codec: ") + what);
}

}  // namespace

double quantize_rank(double rank) { return rank_field(rank) / kRankUnit; }

std::vector<std::uint8_t> encode(const DioMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(kDioBaseSize + 4);
  out.push_back(kCodeDio);
  put16(out, msg.sender);
  out.push_back(kInstanceId);
  out.push_back(kVersion);
  put16(out, rank_field(msg.rank.value));
  out.push_back(0x80);  // grounded, MOP 0, preference 0
  out.push_back(0);     // DTSN
  out.push_back(0);     // flags
  out.push_back(0);     // reserved
  for (int i = 0; i < 12; ++i) out.push_back(0);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(msg.dodag_id >> shift));
  if (msg.relay_suboption) {
    out.push_back(kOptionRelay);
    out.push_back(2);
    put16(out, *msg.relay_suboption);
  }
  return out;
}

std::vector<std::uint8_t> encode(const DisMessage& msg) {
  std::vector<std::uint8_t> out{kCodeDis};
  put16(out, msg.sender);
  out.push_back(0);
  out.push_back(0);
  return out;
}

std::vector<std::uint8_t> encode(const DaoMessage& msg) {
  std::vector<std::uint8_t> out{kCodeDao};
  put16(out, msg.sender);
  out.push_back(kInstanceId);
  out.push_back(0);  // K=0, D=0
  out.push_back(0);
  out.push_back(0);  // DAO sequence
  out.push_back(kOptionTarget);
  out.push_back(2);
  put16(out, msg.target);
  out.push_back(kOptionTransit);
  out.push_back(2);
  put16(out, msg.via_parent);
  return out;
}

DioMessage decode_dio(std::span<const std::uint8_t> b) {
  expect(b.size() >= kDioBaseSize, "truncated DIO");
  expect(b[0] == kCodeDio, "not a DIO");
  DioMessage msg;
  msg.sender = get16(b, 1);
  expect(b[3] == kInstanceId && b[4] == kVersion, "unexpected instance or version");
  msg.rank.value = get16(b, 5) / kRankUnit;
  std::uint32_t dodag = 0;
  for (std::size_t i = kDioBaseSize - 4; i < kDioBaseSize; ++i) dodag = (dodag << 8) | b[i];
  msg.dodag_id = dodag;
  std::size_t at = kDioBaseSize;
  while (at < b.size()) {
    expect(at + 2 <= b.size(), "truncated option header");
    const std::uint8_t type = b[at];
    const std::uint8_t len = b[at + 1];
    expect(at + 2 + len <= b.size(), "truncated option body");
    if (type == kOptionRelay) {
      expect(len == 2, "relay option length");
      msg.relay_suboption = get16(b, at + 2);
    }
    at += 2 + len;
  }
  return msg;
}

DisMessage decode_dis(std::span<const std::uint8_t> b) {
  expect(b.size() == 5, "DIS length");
  expect(b[0] == kCodeDis, "not a DIS");
  return DisMessage{get16(b, 1)};
}

DaoMessage decode_dao(std::span<const std::uint8_t> b) {
  expect(b.size() == 15, "DAO length");
  expect(b[0] == kCodeDao, "not a DAO");
  expect(b[7] == kOptionTarget && b[8] == 2, "target option");
  expect(b[11] == kOptionTransit && b[12] == 2, "transit option");
  DaoMessage msg;
  msg.sender = get16(b, 1);
  msg.target = get16(b, 9);
  msg.via_parent = get16(b, 13);
  return msg;
}

}  // namespace cooprpl::codec
