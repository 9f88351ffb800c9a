#include "reltest/boolfn.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace reltest {

int BooleanFunction::validate_tree(const std::vector<DtNode>& nodes, int n) {
  struct Walker {
    const std::vector<DtNode>& nodes;
    int n;
    int leaves = 0;
    int visit(int idx, std::uint64_t path_vars, int depth) {
      if (idx < 0 || idx >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("decision_tree: child index out of range");
      if (depth > n) throw std::invalid_argument("decision_tree: path longer than n");
      const DtNode& nd = nodes[static_cast<size_t>(idx)];
      if (nd.var < 0) {
        if (nd.child[0] != 0 && nd.child[0] != 1)
          throw std::invalid_argument("decision_tree: leaf value must be 0 or 1");
        ++leaves;
        return leaves;
      }
      if (nd.var >= n) throw std::invalid_argument("decision_tree: variable out of range");
      std::uint64_t bit = 1ULL << nd.var;
      if (path_vars & bit)
        throw std::invalid_argument("decision_tree: variable repeats on a path");
      visit(nd.child[0], path_vars | bit, depth + 1);
      visit(nd.child[1], path_vars | bit, depth + 1);
      return leaves;
    }
  };
  Walker w{nodes, n};
  return w.visit(0, 0, 0);
}

BooleanFunction apply_permutation(const BooleanFunction& f, const Permutation& pi) {
  if (pi.n() != f.n()) throw std::invalid_argument("apply_permutation: size mismatch");
  if (const auto* d = std::get_if<BooleanFunction::Dense>(&f.repr())) {
    std::vector<std::uint64_t> out(BooleanFunction::table_words(f.n()), 0);
    std::uint64_t total = 1ULL << f.n();
    for (std::uint64_t x = 0; x < total; ++x) {
      std::uint64_t g = pi.apply(x);
      if ((d->words[g >> 6] >> (g & 63)) & 1ULL) out[x >> 6] |= 1ULL << (x & 63);
    }
    return BooleanFunction::dense(f.n(), std::move(out));
  }
  if (const auto* j = std::get_if<BooleanFunction::Junta>(&f.repr())) {
    // f = core_sigma, so f_pi = core_{sigma'} with sigma'(i) = pi(sigma(i)).
    std::vector<int> image(j->sigma.image.size());
    for (size_t i = 0; i < image.size(); ++i)
      image[i] = pi.map[static_cast<size_t>(j->sigma.image[i])];
    return BooleanFunction::junta(f.n(), InjectiveMap(f.n(), std::move(image)),
                                  BooleanFunction(*j->core));
  }
  const auto& t = std::get<BooleanFunction::Dtree>(f.repr());
  std::vector<DtNode> nodes = t.nodes;
  for (auto& nd : nodes)
    if (nd.var >= 0) nd.var = pi.map[static_cast<size_t>(nd.var)];
  return BooleanFunction::decision_tree(f.n(), std::move(nodes));
}

std::vector<std::uint64_t> dense_words(const BooleanFunction& f) {
  if (f.n() > kMaxDenseVars)
    throw std::invalid_argument("dense_words: n exceeds dense cap");
  if (const auto* d = std::get_if<BooleanFunction::Dense>(&f.repr())) return d->words;
  std::vector<std::uint64_t> out(BooleanFunction::table_words(f.n()), 0);
  std::uint64_t total = 1ULL << f.n();
  for (std::uint64_t x = 0; x < total; ++x)
    if (f.evaluate_bits(x)) out[x >> 6] |= 1ULL << (x & 63);
  return out;
}

std::string table_to_hex(const std::vector<std::uint64_t>& words, int n) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t bits = 1ULL << n;
  size_t chars = static_cast<size_t>((bits + 3) / 4);
  std::string out(chars, '0');
  for (size_t c = 0; c < chars; ++c) {
    std::uint64_t pos = 4 * c;
    unsigned nib = static_cast<unsigned>((words[pos >> 6] >> (pos & 63)) & 0xfULL);
    out[c] = digits[nib];
  }
  return out;
}

std::vector<std::uint64_t> hex_to_table(const std::string& hex, int n) {
  std::uint64_t bits = 1ULL << n;
  size_t chars = static_cast<size_t>((bits + 3) / 4);
  if (hex.size() != chars)
    throw std::invalid_argument("hex table: expected " + std::to_string(chars) + " hex digits");
  std::vector<std::uint64_t> words(BooleanFunction::table_words(n), 0);
  for (size_t c = 0; c < chars; ++c) {
    char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[c])));
    unsigned nib;
    if (ch >= '0' && ch <= '9')
      nib = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f')
      nib = static_cast<unsigned>(ch - 'a' + 10);
    else
      throw std::invalid_argument("hex table: bad digit");
    std::uint64_t pos = 4 * c;
    words[pos >> 6] |= static_cast<std::uint64_t>(nib) << (pos & 63);
  }
  if (bits < 64 && (words[0] & ~mask_n(static_cast<int>(bits))))
    throw std::invalid_argument("hex table: bits beyond 2^n set");
  return words;
}

namespace {

std::string dtree_expr(const std::vector<DtNode>& nodes, int idx) {
  const DtNode& nd = nodes[static_cast<size_t>(idx)];
  if (nd.var < 0) return nd.child[0] ? "1" : "0";
  return "(x" + std::to_string(nd.var + 1) + " " + dtree_expr(nodes, nd.child[0]) + " " +
         dtree_expr(nodes, nd.child[1]) + ")";
}

struct ExprParser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& why) {
    throw std::invalid_argument("dtree expr: " + why + " at offset " + std::to_string(pos));
  }
  int parse(std::vector<DtNode>& nodes) {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '0' || s[pos] == '1') {
      nodes.push_back(DtNode::leaf(s[pos] == '1'));
      ++pos;
      return static_cast<int>(nodes.size()) - 1;
    }
    if (s[pos] != '(') fail("expected '(', '0' or '1'");
    ++pos;
    skip_ws();
    if (pos >= s.size() || s[pos] != 'x') fail("expected variable");
    ++pos;
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected variable number");
    int var = std::stoi(s.substr(start, pos - start));
    if (var < 1) fail("variables are 1-based");
    int self = static_cast<int>(nodes.size());
    nodes.push_back(DtNode::internal(var - 1, 0, 0));
    int lo = parse(nodes);
    int hi = parse(nodes);
    nodes[static_cast<size_t>(self)].child[0] = lo;
    nodes[static_cast<size_t>(self)].child[1] = hi;
    skip_ws();
    if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
    ++pos;
    return self;
  }
};

std::string take_field(std::istringstream& in, const std::string& key) {
  std::string tok;
  if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
    throw std::invalid_argument("function format: expected " + key + "=...");
  return tok.substr(key.size() + 1);
}

}  // namespace

std::string format_function(const BooleanFunction& f) {
  if (const auto* d = std::get_if<BooleanFunction::Dense>(&f.repr()))
    return "table n=" + std::to_string(f.n()) + " hex=" + table_to_hex(d->words, f.n());
  if (const auto* j = std::get_if<BooleanFunction::Junta>(&f.repr())) {
    std::string vars;
    for (int i = 0; i < j->sigma.h; ++i) {
      if (i) vars += ",";
      vars += std::to_string(j->sigma.image[static_cast<size_t>(i)] + 1);
    }
    return "junta n=" + std::to_string(f.n()) + " vars=" + vars +
           " core=" + table_to_hex(dense_words(*j->core), j->sigma.h);
  }
  const auto& t = std::get<BooleanFunction::Dtree>(f.repr());
  return "dtree n=" + std::to_string(f.n()) + " expr=" + dtree_expr(t.nodes, 0);
}

BooleanFunction parse_function(const std::string& line) {
  std::istringstream in(line);
  std::string kind;
  if (!(in >> kind)) throw std::invalid_argument("function format: empty line");
  if (kind == "table") {
    int n = std::stoi(take_field(in, "n"));
    if (n < 1 || n > kMaxDenseVars) throw std::invalid_argument("table: n out of range");
    return BooleanFunction::dense(n, hex_to_table(take_field(in, "hex"), n));
  }
  if (kind == "junta") {
    int n = std::stoi(take_field(in, "n"));
    std::string vars = take_field(in, "vars");
    std::vector<int> image;
    std::istringstream vs(vars);
    std::string piece;
    while (std::getline(vs, piece, ',')) {
      int v = std::stoi(piece);
      if (v < 1) throw std::invalid_argument("junta: variables are 1-based");
      image.push_back(v - 1);
    }
    int h = static_cast<int>(image.size());
    if (h < 1 || h > kMaxDenseVars) throw std::invalid_argument("junta: bad arity");
    BooleanFunction core = BooleanFunction::dense(h, hex_to_table(take_field(in, "core"), h));
    return BooleanFunction::junta(n, InjectiveMap(n, std::move(image)), std::move(core));
  }
  if (kind == "dtree") {
    int n = std::stoi(take_field(in, "n"));
    std::string rest;
    std::getline(in, rest);
    auto eq = rest.find("expr=");
    if (eq == std::string::npos) throw std::invalid_argument("dtree: expected expr=");
    std::string expr = rest.substr(eq + 5);
    ExprParser p{expr};
    std::vector<DtNode> nodes;
    int root = p.parse(nodes);
    p.skip_ws();
    if (p.pos != expr.size()) p.fail("trailing characters");
    if (root != 0) throw std::logic_error("dtree: root not first");
    return BooleanFunction::decision_tree(n, std::move(nodes));
  }
  throw std::invalid_argument("function format: unknown kind '" + kind + "'");
}

BooleanFunction load_function_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open function file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t\r\n");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    return parse_function(line.substr(i));
  }
  throw std::runtime_error("function file has no function line: " + path);
}

}  // namespace reltest
