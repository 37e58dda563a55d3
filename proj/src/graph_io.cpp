#include "quasirand/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "quasirand/error.hpp"

namespace quasirand {
namespace {

constexpr std::string_view kGraph6Header = ">>graph6<<";

void append_size(std::string& out, std::int64_t n) {
  if (n <= 62) {
    out.push_back(static_cast<char>(63 + n));
  } else if (n <= 258047) {
    out.push_back(126);
    for (int shift = 12; shift >= 0; shift -= 6) {
      out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
    }
  } else {
    out.push_back(126);
    out.push_back(126);
    for (int shift = 30; shift >= 0; shift -= 6) {
      out.push_back(static_cast<char>(63 + ((n >> shift) & 63)));
    }
  }
}

int decode_char(std::string_view text, std::size_t pos) {
  const auto c = static_cast<unsigned char>(text[pos]);
  if (c < 63 || c > 126) throw ParseError("invalid graph6 byte", pos);
  return c - 63;
}

}  // namespace

std::string to_graph6(const Graph& g) {
  if (g.loops_enabled()) {
    throw Error(ErrorKind::kUnsupported, "graph6 cannot encode loop-enabled graphs");
  }
  const int n = g.order();
  std::string out;
  append_size(out, n);
  int acc = 0;
  int nbits = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++nbits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits > 0) out.push_back(static_cast<char>(63 + (acc << (6 - nbits))));
  return out;
}

Graph from_graph6(std::string_view text) {
  std::size_t pos = 0;
  if (text.starts_with(kGraph6Header)) pos = kGraph6Header.size();
  std::size_t end = text.size();
  while (end > pos && (text[end - 1] == '\n' || text[end - 1] == '\r')) --end;
  if (pos >= end) throw ParseError("empty graph6 input", pos);

  std::int64_t n = 0;
  if (text[pos] != 126) {
    n = decode_char(text, pos++);
  } else if (pos + 1 < end && text[pos + 1] != 126) {
    if (pos + 4 > end) throw ParseError("truncated graph6 size field", end);
    for (int t = 1; t <= 3; ++t) n = (n << 6) | decode_char(text, pos + t);
    pos += 4;
  } else {
    if (pos + 8 > end) throw ParseError("truncated graph6 size field", end);
    for (int t = 2; t <= 7; ++t) n = (n << 6) | decode_char(text, pos + t);
    pos += 8;
  }
  if (n > 100000) throw ParseError("graph6 order too large", pos);

  const std::int64_t bits = choose2(n);
  const std::size_t body = static_cast<std::size_t>((bits + 5) / 6);
  if (end - pos != body) {
    throw ParseError("graph6 body length mismatch (expected " + std::to_string(body) +
                         " bytes)",
                     end - pos < body ? end : pos + body);
  }
  Graph g(static_cast<int>(n));
  std::int64_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const std::size_t at = pos + static_cast<std::size_t>(k / 6);
      const int v = decode_char(text, at);
      if ((v >> (5 - k % 6)) & 1) g.toggle_edge(i, j);
    }
  }
  if (bits % 6 != 0) {
    const std::size_t last = pos + body - 1;
    const int pad = decode_char(text, last) & ((1 << (6 - bits % 6)) - 1);
    if (pad != 0) throw ParseError("nonzero graph6 padding bits", last);
  }
  return g;
}

std::string to_loopgraph(const Graph& g) {
  std::ostringstream out;
  out << "LG " << g.order() << '\n';
  for (int i = 0; i < g.order(); ++i) {
    if (g.has_loop(i)) out << i << ' ' << i << '\n';
    for (int j = i + 1; j < g.order(); ++j) {
      if (g.has_edge(i, j)) out << i << ' ' << j << '\n';
    }
  }
  return out.str();
}

Graph from_loopgraph(std::string_view text) {
  std::size_t pos = 0;
  auto skip_blank = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  };
  auto read_int = [&]() -> std::int64_t {
    skip_blank();
    std::int64_t v = 0;
    auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (res.ec != std::errc()) throw ParseError("expected integer", pos);
    pos = static_cast<std::size_t>(res.ptr - text.data());
    return v;
  };
  auto end_line = [&] {
    skip_blank();
    if (pos < text.size()) {
      if (text[pos] != '\n') throw ParseError("unexpected trailing characters", pos);
      ++pos;
    }
  };

  if (!text.starts_with("LG")) throw ParseError("missing 'LG' header", 0);
  pos = 2;
  const std::int64_t n = read_int();
  if (n < 0 || n > 100000) throw ParseError("vertex count out of range", pos);
  end_line();
  Graph g(static_cast<int>(n), true);
  while (true) {
    skip_blank();
    while (pos < text.size() && text[pos] == '\n') {
      ++pos;
      skip_blank();
    }
    if (pos >= text.size()) break;
    const std::size_t line_start = pos;
    const std::int64_t i = read_int();
    const std::int64_t j = read_int();
    if (i < 0 || j < 0 || i >= n || j >= n) throw ParseError("vertex out of range", line_start);
    if (i > j) throw ParseError("edge must satisfy i <= j", line_start);
    if (i == j) {
      if (g.has_loop(static_cast<int>(i))) throw ParseError("duplicate loop", line_start);
      g.set_loop(static_cast<int>(i), true);
    } else {
      if (g.has_edge(static_cast<int>(i), static_cast<int>(j))) {
        throw ParseError("duplicate edge", line_start);
      }
      g.toggle_edge(static_cast<int>(i), static_cast<int>(j));
    }
    end_line();
  }
  return g;
}

Graph parse_graph(std::string_view text) {
  if (text.starts_with("LG")) return from_loopgraph(text);
  return from_graph6(text);
}

GraphFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".lg" ? GraphFormat::kLoopGraph : GraphFormat::kGraph6;
}

void write_graph(const std::filesystem::path& path, const Graph& g, GraphFormat format) {
  std::string body = format == GraphFormat::kGraph6 ? to_graph6(g) + "\n" : to_loopgraph(g);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path.string());
  out << body;
}

Graph read_graph(const std::filesystem::path& path, std::optional<GraphFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (!format) return parse_graph(text);
  return *format == GraphFormat::kGraph6 ? from_graph6(text) : from_loopgraph(text);
}

}  // namespace quasirand
