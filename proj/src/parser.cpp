#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

#include "wherecheck/frontend.hpp"

namespace wherecheck {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line), column_(column) {}

namespace {

enum class Tok { ident, number, keyword, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int column = 1;
};

const char* const kKeywords[] = {"skip", "if",      "then",  "else",   "fi", "while",
                                 "do",   "od",      "declass", "input", "output"};

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.text = std::string(text.substr(i, j - i));
      t.kind = is_keyword(t.text) ? Tok::keyword : Tok::ident;
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.text = std::string(text.substr(i, j - i));
      t.kind = Tok::number;
      advance(j - i);
    } else {
      static const char* const two[] = {":=", "==", "!=", "<="};
      std::string sym;
      for (const char* s : two)
        if (text.substr(i, 2) == s) sym = s;
      if (sym.empty()) {
        if (std::string_view("();,+-*<&|").find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        sym = std::string(1, c);
      }
      t.text = sym;
      t.kind = Tok::symbol;
      advance(sym.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  CommandPtr program() {
    CommandPtr c = sequence();
    if (peek().kind != Tok::end) fail("expected ';' or end of program");
    return c;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    if (peek().kind != Tok::end) fail("unexpected trailing input");
    return e;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", found " + found, t.line, t.column);
  }

  bool at(Tok k, const char* text) const { return peek().kind == k && peek().text == text; }
  bool at_symbol(const char* s) const { return at(Tok::symbol, s); }
  bool at_keyword(const char* s) const { return at(Tok::keyword, s); }

  void expect_symbol(const char* s) {
    if (!at_symbol(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  void expect_keyword(const char* s) {
    if (!at_keyword(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::ident) fail(std::string("expected ") + what);
    return take().text;
  }

  bool starts_command() const {
    const Token& t = peek();
    if (t.kind == Tok::ident) return true;
    if (t.kind != Tok::keyword) return false;
    return t.text == "skip" || t.text == "if" || t.text == "while" || t.text == "input" ||
           t.text == "output";
  }

  CommandPtr sequence() {
    CommandPtr head = command();
    if (at_symbol(";")) {
      ++pos_;
      if (starts_command()) return Command::seq(head, sequence());
    }
    return head;
  }

  CommandPtr command() {
    const Token& t = peek();
    if (t.kind == Tok::keyword) {
      if (t.text == "skip") {
        ++pos_;
        return Command::skip();
      }
      if (t.text == "if") {
        ++pos_;
        ExprPtr cond = expr();
        expect_keyword("then");
        CommandPtr a = sequence();
        expect_keyword("else");
        CommandPtr b = sequence();
        expect_keyword("fi");
        return Command::if_then_else(cond, a, b);
      }
      if (t.text == "while") {
        ++pos_;
        ExprPtr cond = expr();
        expect_keyword("do");
        CommandPtr body = sequence();
        expect_keyword("od");
        return Command::while_do(cond, body);
      }
      if (t.text == "input") {
        ++pos_;
        expect_symbol("(");
        std::string x = ident("variable");
        expect_symbol(",");
        std::string ch = ident("channel");
        expect_symbol(")");
        return Command::input(x, ch);
      }
      if (t.text == "output") {
        ++pos_;
        expect_symbol("(");
        ExprPtr e = expr();
        expect_symbol(",");
        std::string ch = ident("channel");
        expect_symbol(")");
        return Command::output(e, ch);
      }
      fail("expected a command");
    }
    if (t.kind == Tok::ident) {
      std::string x = take().text;
      expect_symbol(":=");
      if (at_keyword("declass")) {
        ++pos_;
        expect_symbol("(");
        ExprPtr e = expr();
        expect_symbol(")");
        return Command::declass(x, e);
      }
      return Command::assign(x, expr());
    }
    fail("expected a command");
  }

  // Precedence climbing; all binary operators are left-associative.
  ExprPtr expr(int min_prec = 1) {
    ExprPtr lhs = primary();
    for (;;) {
      const Token& t = peek();
      if (t.kind != Tok::symbol) break;
      BinOp op;
      int prec;
      if (!binop(t.text, op, prec) || prec < min_prec) break;
      ++pos_;
      ExprPtr rhs = expr(prec + 1);
      lhs = Expr::binary(op, lhs, rhs);
    }
    return lhs;
  }

  static bool binop(const std::string& s, BinOp& op, int& prec) {
    struct Entry {
      const char* text;
      BinOp op;
      int prec;
    };
    static const Entry table[] = {
        {"|", BinOp::bit_or, 1}, {"&", BinOp::bit_and, 2}, {"==", BinOp::eq, 3},
        {"!=", BinOp::ne, 3},    {"<", BinOp::lt, 4},      {"<=", BinOp::le, 4},
        {"+", BinOp::add, 5},    {"-", BinOp::sub, 5},     {"*", BinOp::mul, 6},
    };
    for (const auto& e : table) {
      if (s == e.text) {
        op = e.op;
        prec = e.prec;
        return true;
      }
    }
    return false;
  }

  ExprPtr primary() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      Value v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{}) fail("number out of range");
      ++pos_;
      return Expr::constant(v);
    }
    if (t.kind == Tok::ident) return Expr::variable(take().text);
    if (at_symbol("(")) {
      ++pos_;
      ExprPtr e = expr();
      expect_symbol(")");
      return e;
    }
    if (t.kind == Tok::keyword) fail("keyword '" + t.text + "' cannot be used as an identifier");
    fail("expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

Level level_or_fail(const Lattice& lat, const std::string& name, int line) {
  auto l = lat.find(name);
  if (!l) throw ParseError("unknown security level '" + name + "'", line, 1);
  return *l;
}

} // namespace

Program parse_program(std::string_view text) {
  Parser p(lex(text));
  return Program(p.program());
}

ExprPtr parse_expression(std::string_view text) {
  Parser p(lex(text));
  return p.expression_only();
}

Policy parse_policy(std::string_view text) {
  Policy policy;
  bool saw_lattice = false;
  struct Pending {
    std::string kind, name, level, direction;
    std::optional<std::size_t> length;
    int line;
  };
  std::vector<Pending> decls;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.rfind("lattice:", 0) == 0) {
      if (saw_lattice) throw ParseError("duplicate lattice declaration", line_no, 1);
      saw_lattice = true;
      std::string body = line.substr(8);
      std::stringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        std::string it = trim(item);
        if (it.empty()) continue;
        auto lt = it.find('<');
        if (lt == std::string::npos) {
          if (words(it).size() != 1) throw ParseError("malformed lattice entry '" + it + "'", line_no, 1);
          if (!policy.lattice.find(it)) policy.lattice.add(it);
          continue;
        }
        std::string a = trim(it.substr(0, lt)), b = trim(it.substr(lt + 1));
        if (words(a).size() != 1 || words(b).size() != 1)
          throw ParseError("malformed lattice pair '" + it + "'", line_no, 1);
        Level la = policy.lattice.find(a) ? *policy.lattice.find(a) : policy.lattice.add(a);
        Level lb = policy.lattice.find(b) ? *policy.lattice.find(b) : policy.lattice.add(b);
        if (la == lb) throw ParseError("cycle in lattice: " + a + " < " + a, line_no, 1);
        policy.lattice.add_order(la, lb);
      }
      continue;
    }

    // "var NAME : LEVEL" / "channel NAME : LEVEL input|output [length N]"
    std::string spaced;
    for (char c : line) {
      if (c == ':') spaced += " : ";
      else spaced += c;
    }
    auto w = words(spaced);
    if (w.size() >= 4 && w[0] == "var" && w[2] == ":") {
      if (w.size() != 4) throw ParseError("malformed var declaration", line_no, 1);
      decls.push_back({"var", w[1], w[3], "", std::nullopt, line_no});
    } else if (w.size() >= 5 && w[0] == "channel" && w[2] == ":") {
      Pending d{"channel", w[1], w[3], w[4], std::nullopt, line_no};
      if (d.direction != "input" && d.direction != "output")
        throw ParseError("channel direction must be 'input' or 'output'", line_no, 1);
      if (w.size() == 7 && w[5] == "length") {
        std::size_t n = 0;
        auto [p, ec] = std::from_chars(w[6].data(), w[6].data() + w[6].size(), n);
        if (ec != std::errc{} || p != w[6].data() + w[6].size())
          throw ParseError("malformed channel length", line_no, 1);
        d.length = n;
      } else if (w.size() != 5) {
        throw ParseError("malformed channel declaration", line_no, 1);
      }
      decls.push_back(d);
    } else {
      throw ParseError("unrecognized policy line '" + line + "'", line_no, 1);
    }
  }
  if (!saw_lattice) throw ParseError("missing 'lattice:' line", line_no, 1);
  try {
    policy.lattice.close();
  } catch (const PolicyError& e) {
    throw ParseError(e.what(), 1, 1);
  }

  for (const auto& d : decls) {
    Level lvl = level_or_fail(policy.lattice, d.level, d.line);
    bool dup = policy.variables.count(d.name) || policy.channels.count(d.name);
    if (dup) throw ParseError("duplicate declaration of '" + d.name + "'", d.line, 1);
    if (d.kind == "var") {
      policy.variables.emplace(d.name, lvl);
    } else {
      ChannelDecl c;
      c.level = lvl;
      c.direction = d.direction == "input" ? Direction::input : Direction::output;
      c.length = d.length;
      policy.channels.emplace(d.name, c);
    }
  }
  return policy;
}

} // namespace wherecheck
