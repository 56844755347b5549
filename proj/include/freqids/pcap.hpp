#pragma once

// Classic libpcap capture files (not pcapng), Ethernet link type only.

#include <arpa/inet.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/flow.hpp"

namespace freqids {

inline constexpr std::uint32_t kPcapMagic = 0xa1b2c3d4;
inline constexpr std::uint32_t kPcapMagicSwapped = 0xd4c3b2a1;
inline constexpr std::uint32_t kLinkTypeEthernet = 1;
inline constexpr std::size_t kPcapGlobalHeaderSize = 24;
inline constexpr std::size_t kPcapRecordHeaderSize = 16;

enum class PcapDiagnostic { None, TruncatedRecord };

struct PcapParseResult {
  std::vector<PacketRecord> records;
  PcapDiagnostic diagnostic = PcapDiagnostic::None;
  std::string message;

  bool truncated() const noexcept { return diagnostic == PcapDiagnostic::TruncatedRecord; }
};

namespace detail {

inline std::uint32_t load_u32(const std::uint8_t* p, bool big_endian) {
  if (big_endian) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
  }
  return (std::uint32_t{p[3]} << 24) | (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[1]} << 8) | p[0];
}

inline std::uint16_t load_be16(const std::uint8_t* p) { return static_cast<std::uint16_t>((p[0] << 8) | p[1]); }

inline std::string format_ipv4(const std::uint8_t* p) {
  return std::to_string(p[0]) + "." + std::to_string(p[1]) + "." + std::to_string(p[2]) + "." +
         std::to_string(p[3]);
}

inline std::string format_ipv6(const std::uint8_t* p) {
  char buf[INET6_ADDRSTRLEN] = {};
  ::inet_ntop(AF_INET6, p, buf, sizeof(buf));
  return buf;
}

inline std::string format_mac(const std::uint8_t* p) {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02x:%02x:%02x:%02x:%02x:%02x", p[0], p[1], p[2], p[3], p[4], p[5]);
  return buf;
}

// Fills proto_code and flow_key from the captured bytes of one Ethernet frame.
inline void decode_ethernet(std::span<const std::uint8_t> frame, PacketRecord& rec) {
  rec.proto_code = 0;
  if (frame.size() < 14) {
    rec.flow_key = FlowKey::source_only("unknown");
    return;
  }
  std::size_t off = 12;
  std::uint16_t ethertype = load_be16(frame.data() + off);
  off += 2;
  while ((ethertype == 0x8100 || ethertype == 0x88a8) && frame.size() >= off + 4) {
    ethertype = load_be16(frame.data() + off + 2);
    off += 4;
  }
  const std::uint8_t* p = frame.data() + off;
  const std::size_t avail = frame.size() - off;

  auto with_ports = [&](std::string src, std::string dst, std::uint8_t proto, std::size_t l4) {
    std::uint16_t sport = 0, dport = 0;
    if ((proto == 6 || proto == 17) && avail >= l4 + 4) {
      sport = load_be16(p + l4);
      dport = load_be16(p + l4 + 2);
    }
    rec.flow_key = FlowKey::five_tuple(std::move(src), std::move(dst), sport, dport, proto);
  };

  if (ethertype == 0x0800 && avail >= 20) {
    rec.proto_code = p[9];
    std::size_t ihl = static_cast<std::size_t>(p[0] & 0x0f) * 4;
    with_ports(format_ipv4(p + 12), format_ipv4(p + 16), p[9], ihl);
  } else if (ethertype == 0x86dd && avail >= 40) {
    rec.proto_code = p[6];
    with_ports(format_ipv6(p + 8), format_ipv6(p + 24), p[6], 40);
  } else {
    rec.flow_key = FlowKey::source_only(format_mac(frame.data() + 6));
  }
}

}  // namespace detail

/// Decode a capture held in memory. A bad or truncated global header throws
/// MalformedHeader; a truncated record stops parsing and the records decoded
/// so far are returned with a TruncatedRecord diagnostic.
inline PcapParseResult parse_pcap(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPcapGlobalHeaderSize) {
    throw MalformedHeader("pcap: truncated global header (" + std::to_string(bytes.size()) + " bytes)");
  }
  bool big_endian;
  // The magic is written in the writer's byte order.
  if (detail::load_u32(bytes.data(), false) == kPcapMagic) {
    big_endian = false;
  } else if (detail::load_u32(bytes.data(), true) == kPcapMagic) {
    big_endian = true;
  } else {
    throw MalformedHeader("pcap: bad magic number");
  }
  const std::uint32_t network = detail::load_u32(bytes.data() + 20, big_endian);
  if (network != kLinkTypeEthernet) {
    throw MalformedHeader("pcap: unsupported link type " + std::to_string(network));
  }

  PcapParseResult out;
  std::size_t off = kPcapGlobalHeaderSize;
  std::size_t index = 0;
  while (off < bytes.size()) {
    if (bytes.size() - off < kPcapRecordHeaderSize) {
      out.diagnostic = PcapDiagnostic::TruncatedRecord;
      out.message = "record " + std::to_string(index) + ": truncated record header";
      break;
    }
    const std::uint8_t* h = bytes.data() + off;
    const std::uint32_t ts_sec = detail::load_u32(h, big_endian);
    const std::uint32_t ts_usec = detail::load_u32(h + 4, big_endian);
    const std::uint32_t incl_len = detail::load_u32(h + 8, big_endian);
    const std::uint32_t orig_len = detail::load_u32(h + 12, big_endian);
    off += kPcapRecordHeaderSize;
    if (bytes.size() - off < incl_len) {
      out.diagnostic = PcapDiagnostic::TruncatedRecord;
      out.message = "record " + std::to_string(index) + ": " + std::to_string(bytes.size() - off) +
                    " of " + std::to_string(incl_len) + " bytes present";
      break;
    }
    PacketRecord rec;
    rec.timestamp_us = static_cast<std::int64_t>(ts_sec) * 1000000 + ts_usec;
    rec.length_bytes = std::min<std::uint32_t>(orig_len, 65535);
    detail::decode_ethernet(bytes.subspan(off, incl_len), rec);
    out.records.push_back(std::move(rec));
    off += incl_len;
    ++index;
  }
  return out;
}

inline std::vector<std::uint8_t> read_binary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline PcapParseResult read_pcap_file(const std::string& path) {
  auto bytes = read_binary_file(path);
  return parse_pcap(bytes);
}

namespace detail {

inline void put_le32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline void put_le16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}
inline void put_be16(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

inline std::array<std::uint8_t, 4> parse_ipv4_or_hash(const std::string& s) {
  std::array<std::uint8_t, 4> a{};
  if (::inet_pton(AF_INET, s.c_str(), a.data()) == 1) return a;
  // Opaque identifiers map to a stable address in 10.0.0.0/8.
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) h = (h ^ c) * 16777619u;
  return {10, static_cast<std::uint8_t>(h >> 16), static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h)};
}

}  // namespace detail

/// Encode records as a little-endian capture of minimal Ethernet/IPv4 frames.
/// Only the headers are captured (incl_len <= orig_len); orig_len carries the
/// record length.
inline std::vector<std::uint8_t> encode_pcap(std::span<const PacketRecord> records) {
  std::vector<std::uint8_t> b;
  detail::put_le32(b, kPcapMagic);
  detail::put_le16(b, 2);
  detail::put_le16(b, 4);
  detail::put_le32(b, 0);
  detail::put_le32(b, 0);
  detail::put_le32(b, 65535);
  detail::put_le32(b, kLinkTypeEthernet);

  for (const auto& r : records) {
    std::vector<std::uint8_t> f;
    const std::array<std::uint8_t, 6> dst_mac{0x02, 0, 0, 0, 0, 1};
    const std::array<std::uint8_t, 6> src_mac{0x02, 0, 0, 0, 0, 2};
    f.insert(f.end(), dst_mac.begin(), dst_mac.end());
    f.insert(f.end(), src_mac.begin(), src_mac.end());
    detail::put_be16(f, 0x0800);
    const std::size_t ip_start = f.size();
    f.push_back(0x45);
    f.push_back(0);
    detail::put_be16(f, static_cast<std::uint16_t>(std::min<std::uint32_t>(r.length_bytes > 14 ? r.length_bytes - 14 : 0, 65535)));
    detail::put_be16(f, 0);
    detail::put_be16(f, 0);
    f.push_back(64);
    f.push_back(r.proto_code);
    detail::put_be16(f, 0);
    auto src = detail::parse_ipv4_or_hash(r.flow_key.source);
    auto dst = detail::parse_ipv4_or_hash(r.flow_key.dest.value_or("10.255.255.254"));
    f.insert(f.end(), src.begin(), src.end());
    f.insert(f.end(), dst.begin(), dst.end());
    std::uint32_t sum = 0;
    for (std::size_t i = ip_start; i < ip_start + 20; i += 2) sum += (f[i] << 8) | f[i + 1];
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    const auto csum = static_cast<std::uint16_t>(~sum);
    f[ip_start + 10] = static_cast<std::uint8_t>(csum >> 8);
    f[ip_start + 11] = static_cast<std::uint8_t>(csum);
    if (r.proto_code == 6 || r.proto_code == 17) {
      detail::put_be16(f, r.flow_key.source_port.value_or(0));
      detail::put_be16(f, r.flow_key.dest_port.value_or(0));
      const std::size_t rest = r.proto_code == 6 ? 16 : 4;
      f.insert(f.end(), rest, 0);
      if (r.proto_code == 6) f[ip_start + 20 + 12] = 0x50;
    }
    const auto incl = static_cast<std::uint32_t>(std::min<std::size_t>(f.size(), r.length_bytes));
    detail::put_le32(b, static_cast<std::uint32_t>(r.timestamp_us / 1000000));
    detail::put_le32(b, static_cast<std::uint32_t>(r.timestamp_us % 1000000));
    detail::put_le32(b, incl);
    detail::put_le32(b, r.length_bytes);
    b.insert(b.end(), f.begin(), f.begin() + incl);
  }
  return b;
}

inline void write_pcap_file(const std::string& path, std::span<const PacketRecord> records) {
  auto bytes = encode_pcap(records);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace freqids
