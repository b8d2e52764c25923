#include "garota/cli/trace_file.h"

#include <charconv>
#include <sstream>

namespace garota::cli {

namespace {

using sim::Address;
using sim::MemoryLayout;
using sim::Region;

std::string hex4(unsigned v) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%04X", v & 0xFFFF);
  return buf;
}

std::string region_text(const Region& r) {
  return hex4(r.min.value) + "-" + hex4(r.max.value);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto k = s.find(sep, pos);
    out.push_back(s.substr(pos, k == s.npos ? s.npos : k - pos));
    if (k == s.npos) return out;
    pos = k + 1;
  }
}

class LineParser {
 public:
  explicit LineParser(std::size_t line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw TraceFileError("trace line " + std::to_string(line_) + ": " + msg);
  }

  std::uint64_t number(std::string_view s) const {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      fail("bad number '" + std::string(s) + "'");
    }
    return v;
  }

  // Exactly 0x-prefixed four hex digits.
  Address hex(std::string_view s) const {
    if (s.size() != 6 || s[0] != '0' || s[1] != 'x') fail("bad hex field '" + std::string(s) + "'");
    unsigned v = 0;
    const auto [p, ec] = std::from_chars(s.data() + 2, s.data() + 6, v, 16);
    if (ec != std::errc() || p != s.data() + 6) fail("bad hex field '" + std::string(s) + "'");
    return Address(static_cast<std::uint16_t>(v));
  }

  bool bit(std::string_view s) const {
    if (s == "0") return false;
    if (s == "1") return true;
    fail("bad bit '" + std::string(s) + "'");
  }

  Region region(std::string_view s) const {
    const auto dash = s.find('-');
    if (dash == s.npos) fail("bad region '" + std::string(s) + "'");
    return {hex(s.substr(0, dash)), hex(s.substr(dash + 1))};
  }

 private:
  std::size_t line_;
};

}  // namespace

TraceFile TraceFile::of(const sim::Trace& t, sim::IrqSource trigger) {
  TraceFile f;
  f.layout = t.layout;
  f.trigger = trigger;
  f.rows.reserve(t.rows.size());
  for (const auto& r : t.rows) f.rows.push_back({r.snap, r.guards});
  return f;
}

std::vector<sim::CycleSnapshot> TraceFile::snapshots() const {
  std::vector<sim::CycleSnapshot> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.snap);
  return out;
}

std::string emit_trace(const TraceFile& f) {
  const auto& l = f.layout;
  std::string out = "# layout init=" + region_text(l.init) + " tcb=" + region_text(l.tcb) +
                    " pmem=" + region_text(l.pmem) + " dmem=" + region_text(l.dmem) +
                    " irq_cfg=" + region_text(l.irq_cfg) +
                    " irq_table=" + region_text(l.irq_table) + "\n";
  out += "# trigger " + std::string(sim::to_string(f.trigger)) + "\n";
  out += std::string(kTraceHeader) + "\n";
  auto b = [](bool v) { return v ? ",1" : ",0"; };
  for (const auto& r : f.rows) {
    const auto& s = r.snap;
    out += std::to_string(s.cycle) + "," + hex4(s.pc.value) + b(s.w_en) + b(s.r_en) + "," +
           hex4(s.d_addr.value) + b(s.dma_en) + "," + hex4(s.dma_addr.value) + b(s.gie) +
           b(s.irq) + "," + std::string(sim::to_string(s.irq_source)) + b(s.reset);
    for (const auto& g : r.guards) {
      out += ",";
      out += g ? std::string(monitor::to_string(*g)) : "-";
    }
    out += "\n";
  }
  return out;
}

TraceFile parse_trace(std::string_view text) {
  TraceFile f;
  bool header = false;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty()) continue;
    const LineParser p(line_no);
    if (raw[0] == '#') {
      std::istringstream in{std::string(raw.substr(1))};
      std::string key;
      in >> key;
      if (key == "layout") {
        for (std::string kv; in >> kv;) {
          const auto eq = kv.find('=');
          if (eq == kv.npos) p.fail("bad layout entry '" + kv + "'");
          const auto name = kv.substr(0, eq);
          const auto r = p.region(std::string_view(kv).substr(eq + 1));
          if (name == "init") f.layout.init = r;
          else if (name == "tcb") f.layout.tcb = r;
          else if (name == "pmem") f.layout.pmem = r;
          else if (name == "dmem") f.layout.dmem = r;
          else if (name == "irq_cfg") f.layout.irq_cfg = r;
          else if (name == "irq_table") f.layout.irq_table = r;
          else p.fail("unknown region '" + name + "'");
        }
        try {
          f.layout.validate();
        } catch (const Error& e) {
          p.fail(e.what());
        }
      } else if (key == "trigger") {
        std::string v;
        in >> v;
        const auto src = sim::parse_irq_source(v);
        if (!src) p.fail("unknown trigger '" + v + "'");
        f.trigger = *src;
      }
      continue;  // other comment lines are ignored
    }
    if (!header) {
      if (raw != kTraceHeader) p.fail("expected the header row");
      header = true;
      continue;
    }
    const auto c = split(raw, ',');
    if (c.size() != 16) p.fail("expected 16 fields, got " + std::to_string(c.size()));
    TraceFileRow row;
    auto& s = row.snap;
    s.cycle = p.number(c[0]);
    s.pc = p.hex(c[1]);
    s.w_en = p.bit(c[2]);
    s.r_en = p.bit(c[3]);
    s.d_addr = p.hex(c[4]);
    s.dma_en = p.bit(c[5]);
    s.dma_addr = p.hex(c[6]);
    s.gie = p.bit(c[7]);
    s.irq = p.bit(c[8]);
    const auto src = sim::parse_irq_source(c[9]);
    if (!src) p.fail("unknown irq_source '" + std::string(c[9]) + "'");
    s.irq_source = *src;
    s.reset = p.bit(c[10]);
    for (std::size_t g = 0; g < 5; ++g) {
      if (c[11 + g] == "-") continue;
      row.guards[g] = monitor::parse_guard_state(c[11 + g]);
      if (!row.guards[g]) p.fail("unknown guard state '" + std::string(c[11 + g]) + "'");
    }
    if (!f.rows.empty() && s.cycle <= f.rows.back().snap.cycle) {
      p.fail("cycle " + std::to_string(s.cycle) + " does not increase");
    }
    f.rows.push_back(row);
  }
  if (f.rows.empty()) throw TraceFileError("trace has no rows");
  return f;
}

}  // namespace garota::cli
