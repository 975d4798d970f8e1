#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cooprpl/topology.hpp"

namespace cooprpl {

struct Rank {
  double value = 0.0;
  friend auto operator<=>(const Rank&, const Rank&) = default;
};

struct DioMessage {
  NodeId sender = 0;
  Rank rank;
  std::uint32_t dodag_id = 1;
  std::optional<NodeId> relay_suboption;
  friend bool operator==(const DioMessage&, const DioMessage&) = default;
};

struct DisMessage {
  NodeId sender = 0;
  friend bool operator==(const DisMessage&, const DisMessage&) = default;
};

struct DaoMessage {
  NodeId sender = 0;
  NodeId target = 0;
  NodeId via_parent = 0;
  friend bool operator==(const DaoMessage&, const DaoMessage&) = default;
};

// Wire codec. Layouts follow the RPL control-message base objects, with the
// node ids carried in 16-bit fields and rank as a 16-bit fixed-point value
// (kRankUnit steps per unit of ETX rank). Every frame starts with the ICMPv6
// RPL code byte followed by the sender id.
//
//   DIO: code 0x01 | sender u16 | instance u8 | version u8 | rank u16 |
//        flags u8 | dtsn u8 | flags u8 | reserved u8 | dodag_id 16B |
//        [relay option: type 0x0C | len 2 | relay u16]
//   DIS: code 0x00 | sender u16 | flags u8 | reserved u8
//   DAO: code 0x02 | sender u16 | instance u8 | flags u8 | reserved u8 |
//        sequence u8 | target option (0x05) | transit option (0x06)
namespace codec {

inline constexpr std::uint8_t kCodeDis = 0x00;
inline constexpr std::uint8_t kCodeDio = 0x01;
inline constexpr std::uint8_t kCodeDao = 0x02;
inline constexpr std::uint8_t kOptionTarget = 0x05;
inline constexpr std::uint8_t kOptionTransit = 0x06;
inline constexpr std::uint8_t kOptionRelay = 0x0C;
inline constexpr double kRankUnit = 256.0;

std::vector<std::uint8_t> encode(const DioMessage& msg);
std::vector<std::uint8_t> encode(const DisMessage& msg);
std::vector<std::uint8_t> encode(const DaoMessage& msg);

// Each decoder throws SimError(Codec) on truncated frames, wrong codes or
// malformed options.
DioMessage decode_dio(std::span<const std::uint8_t> bytes);
DisMessage decode_dis(std::span<const std::uint8_t> bytes);
DaoMessage decode_dao(std::span<const std::uint8_t> bytes);

// Rank as it survives a round trip through the 16-bit field.
double quantize_rank(double rank);

}  // namespace codec
}  // namespace cooprpl
