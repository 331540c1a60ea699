#include "ledgernet/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ledgernet/errors.hpp"
#include "ledgernet/json_io.hpp"

namespace ledgernet {

std::optional<GraphFormat> parse_graph_format(std::string_view name) {
  if (name == "json") return GraphFormat::json;
  if (name == "pajek" || name == "net") return GraphFormat::pajek;
  return std::nullopt;
}

GraphFormat format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".json") return GraphFormat::json;
  if (ext == ".pajek" || ext == ".net") return GraphFormat::pajek;
  throw UsageError("cannot infer graph format from '" + path.string() + "' (expected .json, .pajek or .net)");
}

void write_json(const InteractionGraph& graph, std::ostream& out) {
  out << "{\"vertices\":[";
  for (NodeIndex i = 0; i < graph.node_count(); ++i) {
    if (i != 0) out << ',';
    out << quote_json(graph.key(i).str());
  }
  out << "],\"edges\":[";
  bool first = true;
  for (const Edge& e : graph.sorted_edges()) {
    if (!first) out << ',';
    first = false;
    out << '[' << quote_json(graph.key(e.low).str()) << ',' << quote_json(graph.key(e.high).str()) << ','
        << e.data.amount.to_string() << ']';
  }
  out << "]}";
}

void write_pajek(const InteractionGraph& graph, std::ostream& out) {
  out << "*Vertices " << graph.node_count() << '\n';
  for (NodeIndex i = 0; i < graph.node_count(); ++i) {
    out << (i + 1) << " \"" << graph.key(i).str() << "\"\n";
  }
  out << "*Edges\n";
  for (const Edge& e : graph.sorted_edges()) {
    out << (e.low + 1) << ' ' << (e.high + 1) << ' ' << e.data.amount.to_string() << '\n';
  }
}

namespace {

template <typename Writer>
void export_with(const InteractionGraph& graph, const std::filesystem::path& path, Writer writer) {
  std::ostringstream buf;
  writer(graph, buf);
  try {
    write_file_atomic(path, buf.view());
  } catch (const IoError& e) {
    throw ExportError(e.what());
  }
}

}  // namespace

void export_json(const InteractionGraph& graph, const std::filesystem::path& path) {
  export_with(graph, path, [](const InteractionGraph& g, std::ostream& o) { write_json(g, o); });
}

void export_pajek(const InteractionGraph& graph, const std::filesystem::path& path) {
  export_with(graph, path, [](const InteractionGraph& g, std::ostream& o) { write_pajek(g, o); });
}

void export_both(const InteractionGraph& graph, const std::filesystem::path& json_path,
                 const std::filesystem::path& pajek_path) {
  std::exception_ptr json_error;
  std::exception_ptr pajek_error;
  {
    std::jthread json_thread([&] {
      try {
        export_json(graph, json_path);
      } catch (...) {
        json_error = std::current_exception();
      }
    });
    std::jthread pajek_thread([&] {
      try {
        export_pajek(graph, pajek_path);
      } catch (...) {
        pajek_error = std::current_exception();
      }
    });
  }
  if (json_error) std::rethrow_exception(json_error);
  if (pajek_error) std::rethrow_exception(pajek_error);
}

// ---------------------------------------------------------------------------
// JSON import

InteractionGraph read_json(std::string_view text, std::optional<Chain> hint) {
  Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("graph JSON must be an object");
  auto vit = doc.find("vertices");
  auto eit = doc.find("edges");
  if (vit == doc.end() || !vit->is_array()) throw ParseError("graph JSON lacks a \"vertices\" array");
  if (eit == doc.end() || !eit->is_array()) throw ParseError("graph JSON lacks an \"edges\" array");

  std::optional<Chain> chain = hint;
  if (auto cit = doc.find("chain"); cit != doc.end()) {
    if (!cit->is_string() || !(chain = parse_chain(cit->get_ref<const std::string&>()))) {
      throw ParseError("unknown chain in graph JSON");
    }
    if (hint && *hint != *chain) throw ParseError("graph JSON holds a " + std::string(chain_name(*chain)) + " graph");
  } else if (!chain) {
    bool all_eth = true;
    for (const auto& v : *vit) {
      if (!v.is_string() || !is_canonical_ethereum_key(v.get_ref<const std::string&>())) all_eth = false;
    }
    chain = all_eth ? Chain::ethereum : Chain::bitcoin;
  }

  InteractionGraph g(*chain);
  for (std::size_t i = 0; i < vit->size(); ++i) {
    const Json& v = (*vit)[i];
    if (!v.is_string()) throw ParseError("vertex #" + std::to_string(i) + " is not a string");
    try {
      auto key = AddressKey::canonicalize(v.get_ref<const std::string&>(), *chain);
      if (key.str() != v.get_ref<const std::string&>() || g.find(key)) {
        throw ParseError("vertex #" + std::to_string(i) + " is duplicate or not canonical");
      }
      g.add_node(key);
    } catch (const AddressError& e) {
      throw ParseError("vertex #" + std::to_string(i) + ": " + e.what());
    }
  }

  for (std::size_t i = 0; i < eit->size(); ++i) {
    const Json& e = (*eit)[i];
    const std::string where = "edge #" + std::to_string(i);
    if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string()) {
      throw ParseError(where + " must be [key, key, amount]");
    }
    auto a = g.find(std::string_view(e[0].get_ref<const std::string&>()));
    auto b = g.find(std::string_view(e[1].get_ref<const std::string&>()));
    if (!a || !b) throw ParseError(where + " names a vertex that is not listed");
    auto amount = amount_from_json(e[2]);
    if (!amount) throw ParseError(where + " has an invalid amount");
    if (*a == *b) throw ParseError(where + " is a self-loop");
    if (!g.add_edge(*a, *b, *amount, 0)) throw ParseError(where + " duplicates an earlier edge");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Pajek import

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++number_;
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

bool iequals_prefix(std::string_view line, std::string_view prefix) {
  if (line.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char c = line[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[i]) return false;
  }
  return true;
}

std::string_view skip_spaces(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool take_uint(std::string_view& s, std::uint64_t& out) {
  s = skip_spaces(s);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr == s.data()) return false;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return true;
}

std::string_view take_token(std::string_view& s) {
  s = skip_spaces(s);
  std::size_t n = 0;
  while (n < s.size() && s[n] != ' ' && s[n] != '\t') ++n;
  auto tok = s.substr(0, n);
  s.remove_prefix(n);
  return tok;
}

}  // namespace

InteractionGraph read_pajek(std::string_view text, std::optional<Chain> chain) {
  LineReader reader(text);
  std::string_view line;

  auto fail = [&](const std::string& msg) -> ParseError { return ParseError(msg, reader.number()); };

  do {
    if (!reader.next(line)) throw ParseError("missing *Vertices header", reader.number());
  } while (skip_spaces(line).empty());
  line = skip_spaces(line);
  if (!iequals_prefix(line, "*vertices")) throw fail("expected *Vertices header");
  std::string_view rest = line.substr(9);
  std::uint64_t n = 0;
  if (!take_uint(rest, n) || !skip_spaces(rest).empty()) throw fail("bad vertex count");

  std::vector<std::string> keys;
  keys.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 20)));
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (!reader.next(line)) throw fail("expected " + std::to_string(n) + " vertex lines");
    std::string_view s = line;
    std::uint64_t id = 0;
    if (!take_uint(s, id) || id != i) throw fail("expected vertex id " + std::to_string(i));
    s = skip_spaces(s);
    std::string_view key;
    if (!s.empty() && s.front() == '"') {
      auto close = s.find('"', 1);
      if (close == std::string_view::npos) throw fail("unterminated vertex label");
      key = s.substr(1, close - 1);
      s.remove_prefix(close + 1);
    } else {
      key = take_token(s);
    }
    // Pajek allows trailing coordinates/attributes; they are ignored.
    if (key.empty()) throw fail("empty vertex label");
    keys.emplace_back(key);
  }

  if (!chain) {
    bool all_eth = true;
    for (const auto& k : keys) {
      if (!is_canonical_ethereum_key(k)) {
        all_eth = false;
        break;
      }
    }
    chain = all_eth ? Chain::ethereum : Chain::bitcoin;
  }

  InteractionGraph g(*chain);
  {
    // Vertex lines are already consumed; report their own line numbers.
    std::size_t first_vertex_line = reader.number() - keys.size() + 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      try {
        auto key = AddressKey::canonicalize(keys[i], *chain);
        if (key.str() != keys[i]) throw AddressError("not canonical");
        if (g.find(key)) throw ParseError("duplicate vertex label", first_vertex_line + i);
        g.add_node(key);
      } catch (const AddressError& e) {
        throw ParseError(std::string("vertex label: ") + e.what(), first_vertex_line + i);
      }
    }
  }

  do {
    if (!reader.next(line)) throw ParseError("missing *Edges section", reader.number());
  } while (skip_spaces(line).empty());
  if (!iequals_prefix(skip_spaces(line), "*edges")) throw fail("expected *Edges header");

  while (reader.next(line)) {
    std::string_view s = skip_spaces(line);
    if (s.empty()) continue;
    if (s.front() == '*') throw fail("unsupported section: " + std::string(s));
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    if (!take_uint(s, a) || !take_uint(s, b)) throw fail("expected '<i> <j> <amount>'");
    if (a < 1 || b < 1 || a > n || b > n) throw fail("edge endpoint out of range");
    if (a == b) throw fail("self-loop edge");
    Amount amount;
    std::string_view w = take_token(s);
    if (!w.empty()) {
      auto parsed = Amount::parse_decimal(w);
      if (!parsed) throw fail("invalid edge amount '" + std::string(w) + "'");
      amount = *parsed;
    }
    if (!skip_spaces(s).empty()) throw fail("trailing data on edge line");
    if (!g.add_edge(static_cast<NodeIndex>(a - 1), static_cast<NodeIndex>(b - 1), amount, 0)) {
      throw fail("duplicate edge");
    }
  }
  return g;
}

InteractionGraph import_graph(const std::filesystem::path& path, GraphFormat format, std::optional<Chain> chain) {
  std::string text = read_file(path);
  switch (format) {
    case GraphFormat::json:
      return read_json(text, chain);
    case GraphFormat::pajek:
      return read_pajek(text, chain);
  }
  throw UsageError("unknown graph format");
}

}  // namespace ledgernet
