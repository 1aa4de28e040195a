#include "mbe/bnet_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mbe/error.hpp"

namespace mbe {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string save_network(const NetworkFile& file) {
  const BeliefNetwork& bn = file.network;
  std::string out = "BNET 1\nvars " + std::to_string(bn.size()) + "\ncard";
  for (int c : bn.domains().cardinalities()) out += " " + std::to_string(c);
  out += "\nfactors " + std::to_string(bn.size()) + "\n";
  for (std::size_t v = 0; v < bn.size(); ++v) {
    const Factor& f = bn.cpt(static_cast<VarId>(v));
    out += "scope " + std::to_string(f.arity());
    for (VarId u : f.scope()) out += " " + std::to_string(u);
    out += " child " + std::to_string(v) + "\n";
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (k) out += ' ';
      out += fmt(f[k]);
    }
    out += "\n";
  }
  if (!file.evidence.empty()) {
    out += "evidence " + std::to_string(file.evidence.size()) + "\n";
    for (auto [v, x] : file.evidence.values()) {
      out += std::to_string(v) + " " + std::to_string(x) + "\n";
    }
  }
  if (file.meta) {
    out += "# rng mt19937_64\n";
    out += "meta seed " + std::to_string(file.meta->seed) + " kind " + to_string(file.meta->kind) +
           "\n";
  }
  return out;
}

void save_network(const NetworkFile& file, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot write " + path.string());
  os << save_network(file);
  if (!os) throw InvalidArgument("write failed for " + path.string());
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++number;
    std::string_view raw(text.data() + pos, end - pos);
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t k = 0;
    while (k < raw.size()) {
      while (k < raw.size() && std::isspace(static_cast<unsigned char>(raw[k]))) ++k;
      const std::size_t start = k;
      while (k < raw.size() && !std::isspace(static_cast<unsigned char>(raw[k]))) ++k;
      if (k > start) line.tokens.push_back({raw.substr(start, k - start), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return next_ >= lines_.size(); }
  const Line& peek() const { return lines_[next_]; }

  const Line& take(std::string_view what) {
    if (done()) {
      const std::size_t last = lines_.empty() ? 1 : lines_.back().number + 1;
      throw ParseError("unexpected end of file, expected " + std::string(what), last, 1);
    }
    return lines_[next_++];
  }

  /// A line starting with `keyword`; returns the remaining tokens.
  std::vector<Token> keyword_line(std::string_view keyword, std::size_t& line_no) {
    const Line& l = take(std::string("'") + std::string(keyword) + "'");
    line_no = l.number;
    if (l.tokens.front().text != keyword) {
      throw ParseError("expected '" + std::string(keyword) + "', found '" +
                           std::string(l.tokens.front().text) + "'",
                       l.number, l.tokens.front().column);
    }
    return {l.tokens.begin() + 1, l.tokens.end()};
  }

 private:
  std::vector<Line> lines_;
  std::size_t next_ = 0;
};

template <class T>
T number(const Token& t, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
    throw ParseError("not a number: '" + std::string(t.text) + "'", line, t.column);
  }
  return v;
}

void expect_count(const std::vector<Token>& toks, std::size_t want, std::size_t line,
                  std::size_t end_column, const std::string& what) {
  if (toks.size() != want) {
    const std::size_t col = toks.size() > want ? toks[want].column : end_column;
    throw ParseError("expected " + std::to_string(want) + " " + what + ", found " +
                         std::to_string(toks.size()),
                     line, col);
  }
}

std::size_t end_col(const Line& l) {
  const Token& t = l.tokens.back();
  return t.column + t.text.size();
}

}  // namespace

NetworkFile load_network(const std::string& text) {
  Reader rd(tokenize(text));
  std::size_t line = 1;

  {
    if (rd.done()) throw ParseError("empty file, expected 'BNET 1'", 1, 1);
    const Line& l = rd.peek();
    if (l.tokens[0].text != "BNET" || l.tokens.size() != 2 || l.tokens[1].text != "1") {
      throw ParseError("header must be 'BNET 1'", l.number, l.tokens[0].column);
    }
    rd.take("header");
  }

  auto toks = rd.keyword_line("vars", line);
  expect_count(toks, 1, line, 5, "value");
  const auto n = number<std::size_t>(toks[0], line);

  toks = rd.keyword_line("card", line);
  expect_count(toks, n, line, toks.empty() ? 5 : toks.back().column + toks.back().text.size(),
               "cardinalities");
  std::vector<int> cards;
  for (const Token& t : toks) {
    const int c = number<int>(t, line);
    if (c < 2) throw ParseError("cardinality must be at least 2", line, t.column);
    cards.push_back(c);
  }
  const Domains dom(cards);

  toks = rd.keyword_line("factors", line);
  expect_count(toks, 1, line, 8, "value");
  const auto k = number<std::size_t>(toks[0], line);
  if (k != n) {
    throw ParseError("a network needs one factor per variable (" + std::to_string(n) + "), found " +
                         std::to_string(k),
                     line, toks[0].column);
  }

  std::vector<std::optional<Factor>> cpts(n);
  std::vector<std::vector<VarId>> parents(n);
  for (std::size_t fi = 0; fi < k; ++fi) {
    const std::string tag = "factor " + std::to_string(fi) + ": ";
    toks = rd.keyword_line("scope", line);
    if (toks.empty()) throw ParseError(tag + "missing scope size", line, 6);
    const auto s = number<std::size_t>(toks[0], line);
    if (toks.size() != s + 3 || toks[s + 1].text != "child") {
      throw ParseError(tag + "expected 'scope <s> <v_1..v_s> child <v>'", line,
                       toks[std::min(toks.size() - 1, s + 1)].column);
    }
    Scope scope;
    for (std::size_t j = 0; j < s; ++j) {
      const auto v = number<VarId>(toks[1 + j], line);
      if (v < 0 || static_cast<std::size_t>(v) >= n) {
        throw ParseError(tag + "variable " + std::to_string(v) + " out of range", line,
                         toks[1 + j].column);
      }
      if (!scope.empty() && v <= scope.back()) {
        throw ParseError(tag + "scope must be strictly ascending", line, toks[1 + j].column);
      }
      scope.push_back(v);
    }
    const Token& ct = toks[s + 2];
    const auto child = number<VarId>(ct, line);
    if (!std::binary_search(scope.begin(), scope.end(), child)) {
      throw ParseError(tag + "child " + std::to_string(child) + " is not in the scope", line,
                       ct.column);
    }
    if (cpts[static_cast<std::size_t>(child)]) {
      throw ParseError(tag + "second CPT for variable " + std::to_string(child), line, ct.column);
    }

    std::size_t cells = 1;
    for (VarId v : scope) cells *= static_cast<std::size_t>(dom.cardinality(v));
    const Line& tl = rd.take("a table line");
    if (tl.tokens.size() != cells) {
      throw ParseError(tag + "table needs " + std::to_string(cells) + " values for the scope's cardinalities, found " +
                           std::to_string(tl.tokens.size()),
                       tl.number, tl.tokens.size() > cells ? tl.tokens[cells].column : end_col(tl));
    }
    std::vector<double> table;
    for (const Token& t : tl.tokens) {
      const double p = number<double>(t, tl.number);
      if (!std::isfinite(p) || p < 0.0) {
        throw ParseError(tag + "probabilities must be finite and nonnegative", tl.number, t.column);
      }
      table.push_back(p);
    }
    Factor f = Factor::over(scope, dom, std::move(table));
    // normalisation over the child for every parent configuration
    const int cc = dom.cardinality(child);
    const std::size_t stride = f.strides()[static_cast<std::size_t>(f.local_index(child))];
    for (std::size_t base = 0; base < f.size(); ++base) {
      if ((base / stride) % static_cast<std::size_t>(cc) != 0) continue;
      double sum = 0.0;
      for (int x = 0; x < cc; ++x) sum += f[base + static_cast<std::size_t>(x) * stride];
      if (std::abs(sum - 1.0) > kCptTolerance) {
        throw ParseError(tag + "column sum " + fmt(sum) + " differs from 1", tl.number, 1);
      }
    }
    for (VarId v : scope) {
      if (v != child) parents[static_cast<std::size_t>(child)].push_back(v);
    }
    cpts[static_cast<std::size_t>(child)] = std::move(f);
  }

  NetworkFile out;
  while (!rd.done()) {
    const Line& l = rd.peek();
    const std::string_view kw = l.tokens[0].text;
    if (kw == "evidence") {
      toks = rd.keyword_line("evidence", line);
      expect_count(toks, 1, line, 9, "value");
      const auto t = number<std::size_t>(toks[0], line);
      for (std::size_t j = 0; j < t; ++j) {
        const Line& el = rd.take("an evidence line");
        if (el.tokens.size() != 2) {
          throw ParseError("evidence line needs '<var> <value>'", el.number, el.tokens[0].column);
        }
        const auto v = number<VarId>(el.tokens[0], el.number);
        const auto x = number<int>(el.tokens[1], el.number);
        if (v < 0 || static_cast<std::size_t>(v) >= n) {
          throw ParseError("evidence variable out of range", el.number, el.tokens[0].column);
        }
        if (x < 0 || x >= dom.cardinality(v)) {
          throw ParseError("evidence value out of range", el.number, el.tokens[1].column);
        }
        if (out.evidence.observed(v)) {
          throw ParseError("variable observed twice", el.number, el.tokens[0].column);
        }
        out.evidence.set(v, x);
      }
    } else if (kw == "meta") {
      toks = rd.keyword_line("meta", line);
      if (toks.size() != 4 || toks[0].text != "seed" || toks[2].text != "kind") {
        throw ParseError("expected 'meta seed <u64> kind <uniform|noisy_or>'", line,
                         toks.empty() ? 5 : toks[0].column);
      }
      NetworkMeta meta;
      meta.seed = number<std::uint64_t>(toks[1], line);
      if (toks[3].text == "uniform") {
        meta.kind = NetworkKind::uniform;
      } else if (toks[3].text == "noisy_or") {
        meta.kind = NetworkKind::noisy_or;
      } else {
        throw ParseError("unknown kind '" + std::string(toks[3].text) + "'", line, toks[3].column);
      }
      out.meta = meta;
    } else {
      throw ParseError("unexpected '" + std::string(kw) + "'", l.number, l.tokens[0].column);
    }
  }

  std::vector<Factor> list;
  for (auto& f : cpts) list.push_back(std::move(*f));
  try {
    out.network = BeliefNetwork(dom, std::move(parents), std::move(list));
  } catch (const InvalidArgument& ex) {
    throw ParseError(ex.what(), 0, 0);
  }
  return out;
}

NetworkFile load_network_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return load_network(ss.str());
}

}  // namespace mbe
