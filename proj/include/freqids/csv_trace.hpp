#pragma once

// CSV packet traces: header `flow_id,timestamp_us,length,proto_code`, one row
// per packet. An optional fifth `label` column (0 benign, 1 malicious) carries
// ground truth for evaluation.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "freqids/error.hpp"
#include "freqids/flow.hpp"

namespace freqids {

inline constexpr std::string_view kCsvHeader = "flow_id,timestamp_us,length,proto_code";
inline constexpr std::string_view kCsvLabeledHeader = "flow_id,timestamp_us,length,proto_code,label";

struct CsvTrace {
  std::vector<LabeledPacket> packets;
  bool labeled = false;

  std::vector<PacketRecord> records() const { return strip_labels(packets); }
};

namespace detail {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

/// Parse a CSV trace. Throws RowParseError with the 1-based line number of
/// the first malformed line (the header is line 1).
inline CsvTrace parse_csv_trace(std::istream& in) {
  CsvTrace trace;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line == kCsvHeader) {
        trace.labeled = false;
      } else if (line == kCsvLabeledHeader) {
        trace.labeled = true;
      } else {
        throw RowParseError(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    auto fields = detail::split_commas(line);
    const std::size_t expected = trace.labeled ? 5 : 4;
    if (fields.size() != expected) {
      throw RowParseError(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw RowParseError(line_no, "empty flow_id");
    LabeledPacket lp;
    std::uint32_t length = 0;
    unsigned proto = 0;
    if (!detail::parse_int(fields[1], lp.record.timestamp_us) || lp.record.timestamp_us < 0) {
      throw RowParseError(line_no, "bad timestamp_us '" + std::string(fields[1]) + "'");
    }
    if (!detail::parse_int(fields[2], length) || length > 65535) {
      throw RowParseError(line_no, "bad length '" + std::string(fields[2]) + "'");
    }
    if (!detail::parse_int(fields[3], proto) || proto > 255) {
      throw RowParseError(line_no, "bad proto_code '" + std::string(fields[3]) + "'");
    }
    if (trace.labeled) {
      if (fields[4] == "0") {
        lp.label = Label::Benign;
      } else if (fields[4] == "1") {
        lp.label = Label::Malicious;
      } else {
        throw RowParseError(line_no, "bad label '" + std::string(fields[4]) + "'");
      }
    }
    lp.record.length_bytes = length;
    lp.record.proto_code = static_cast<std::uint8_t>(proto);
    lp.record.flow_key = FlowKey::source_only(std::string(fields[0]));
    trace.packets.push_back(std::move(lp));
  }
  if (!saw_header) throw RowParseError(1, "missing header");
  return trace;
}

inline std::vector<PacketRecord> parse_csv(std::istream& in) { return parse_csv_trace(in).records(); }

inline std::vector<PacketRecord> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

inline void write_csv(std::ostream& out, std::span<const PacketRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << to_string(r.flow_key) << ',' << r.timestamp_us << ',' << r.length_bytes << ','
        << static_cast<unsigned>(r.proto_code) << '\n';
  }
}

inline void write_labeled_csv(std::ostream& out, std::span<const LabeledPacket> packets) {
  out << kCsvLabeledHeader << '\n';
  for (const auto& lp : packets) {
    const auto& r = lp.record;
    out << to_string(r.flow_key) << ',' << r.timestamp_us << ',' << r.length_bytes << ','
        << static_cast<unsigned>(r.proto_code) << ',' << (lp.label == Label::Malicious ? 1 : 0) << '\n';
  }
}

inline CsvTrace read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_csv_trace(in);
}

}  // namespace freqids
