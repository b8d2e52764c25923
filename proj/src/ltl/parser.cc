#include "garota/ltl/parser.h"

#include <cctype>
#include <set>

namespace garota::ltl {

namespace {

enum class Tok {
  kEnd,
  kIdent,
  kRef,
  kLParen,
  kRParen,
  kNot,
  kAnd,
  kOr,
  kArrow,
  kNext,
  kGlobally,
  kFinally,
  kUntil,
  kWeakUntil,
  kTrue,
  kFalse,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto single = [&](Tok kind) {
      out.push_back({kind, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '(': single(Tok::kLParen); continue;
      case ')': single(Tok::kRParen); continue;
      case '!': single(Tok::kNot); continue;
      case '&': single(Tok::kAnd); continue;
      case '|': single(Tok::kOr); continue;
      default: break;
    }
    if (c == '-') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::kArrow, "->", start});
        i += 2;
        continue;
      }
      throw ParseError("expected '->'", start);
    }
    if (c == '@') {
      ++i;
      if (i >= s.size() || !ident_start(s[i])) {
        throw ParseError("expected a formula name after '@'", i);
      }
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::kRef, std::string(s.substr(start + 1, i - start - 1)),
                     start});
      continue;
    }
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::kIdent;
      if (word == "X") kind = Tok::kNext;
      else if (word == "G") kind = Tok::kGlobally;
      else if (word == "F") kind = Tok::kFinally;
      else if (word == "U") kind = Tok::kUntil;
      else if (word == "W") kind = Tok::kWeakUntil;
      else if (word == "true") kind = Tok::kTrue;
      else if (word == "false") kind = Tok::kFalse;
      out.push_back({kind, std::move(word), start});
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::kEnd, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const FormulaEnv& env)
      : toks_(std::move(toks)), env_(env) {}

  Formula parse() {
    auto f = parse_implies();
    if (peek().kind != Tok::kEnd) {
      throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    }
    return f;
  }

 private:
  const Token& peek() const { return toks_[at_]; }
  const Token& take() { return toks_[at_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++at_;
    return true;
  }

  Formula parse_implies() {
    auto lhs = parse_until();
    if (accept(Tok::kArrow)) return implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_until() {
    auto lhs = parse_or();
    if (accept(Tok::kUntil)) return until(lhs, parse_until());
    if (accept(Tok::kWeakUntil)) return weak_until(lhs, parse_until());
    return lhs;
  }

  Formula parse_or() {
    auto lhs = parse_and();
    while (accept(Tok::kOr)) lhs = disj(lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    auto lhs = parse_unary();
    while (accept(Tok::kAnd)) lhs = conj(lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept(Tok::kNot)) return neg(parse_unary());
    if (accept(Tok::kNext)) return next(parse_unary());
    if (accept(Tok::kGlobally)) return globally(parse_unary());
    if (accept(Tok::kFinally)) return eventually(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::kIdent: return atom(t.text);
      case Tok::kTrue: return lit(true);
      case Tok::kFalse: return lit(false);
      case Tok::kRef: {
        auto it = env_.find(t.text);
        if (it == env_.end()) {
          throw ParseError("unknown formula '@" + t.text + "'", t.pos);
        }
        return it->second;
      }
      case Tok::kLParen: {
        auto f = parse_implies();
        if (!accept(Tok::kRParen)) {
          throw ParseError("expected ')'", peek().pos);
        }
        return f;
      }
      case Tok::kEnd:
        throw ParseError("unexpected end of formula", t.pos);
      default:
        throw ParseError("unexpected '" + t.text + "'", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t at_ = 0;
  const FormulaEnv& env_;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

Formula parse_formula(std::string_view text, const FormulaEnv& env) {
  return Parser(tokenize(text), env).parse();
}

std::vector<NamedFormula> parse_formula_file(std::string_view text) {
  std::vector<NamedFormula> out;
  FormulaEnv env;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (colon == std::string::npos) {
      throw FormulaFileError(where + "expected 'name : formula'");
    }
    NamedFormula entry;
    entry.name = trim(std::string_view(line).substr(0, colon));
    entry.text = trim(std::string_view(line).substr(colon + 1));
    entry.line = line_no;
    if (entry.name.empty() || !ident_start(entry.name[0]) ||
        entry.name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_") !=
            std::string::npos) {
      throw FormulaFileError(where + "bad formula name '" + entry.name + "'");
    }
    if (env.count(entry.name)) {
      throw FormulaFileError(where + "duplicate formula '" + entry.name + "'");
    }
    try {
      entry.formula = parse_formula(entry.text, env);
    } catch (const ParseError& e) {
      throw FormulaFileError(where + e.what());
    }
    entry.helper = entry.name[0] == '_';
    env.emplace(entry.name, entry.formula);
    out.push_back(std::move(entry));
  }
  return out;
}

FormulaSet::FormulaSet(std::vector<NamedFormula> entries)
    : entries_(std::move(entries)) {}

const NamedFormula* FormulaSet::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const Formula& FormulaSet::get(std::string_view name) const {
  const auto* e = find(name);
  if (e == nullptr) throw Error("no formula named '" + std::string(name) + "'");
  return e->formula;
}

std::vector<NamedFormula> FormulaSet::checked() const {
  std::vector<NamedFormula> out;
  for (const auto& e : entries_) {
    if (!e.helper) out.push_back(e);
  }
  return out;
}

std::vector<Formula> FormulaSet::with_prefix(std::string_view prefix) const {
  std::vector<Formula> out;
  for (const auto& e : entries_) {
    if (std::string_view(e.name).substr(0, prefix.size()) == prefix) {
      out.push_back(e.formula);
    }
  }
  return out;
}

}  // namespace garota::ltl
